#include "forge/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forge/catalog.hpp"
#include "forge/grape.hpp"
#include "forge/noise.hpp"
#include "forge/propagator.hpp"
#include "forge/protocols.hpp"
#include "forge/serialize.hpp"
#include "forge/statespace.hpp"

namespace forge::runner {

using nlohmann::json;

int log_level() {
  static int level = [] {
    const char* env = std::getenv("FORGE_LOG");
    if (!env) return 1;
    std::string s(env);
    if (s == "error") return 0;
    if (s == "debug") return 2;
    return 1;
  }();
  return level;
}

void log_error(const std::string& msg) { std::cerr << "forge: error: " << msg << "\n"; }
void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "forge: " << msg << "\n";
}
void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "forge: debug: " << msg << "\n";
}

namespace {

// Records every value actually used so the RunRecord carries the fully
// resolved configuration, defaults included.
struct Resolved {
  const cfg::Config& c;
  json j = json::object();

  double num(const std::string& s, const std::string& k, double fb) {
    double v = c.get_num(s, k, fb);
    j[s][k] = v;
    return v;
  }
  double req_num(const std::string& s, const std::string& k) {
    double v = c.require_num(s, k);
    j[s][k] = v;
    return v;
  }
  int integer(const std::string& s, const std::string& k, int fb) {
    int v = c.get_int(s, k, fb);
    j[s][k] = v;
    return v;
  }
  bool boolean(const std::string& s, const std::string& k, bool fb) {
    bool v = c.get_bool(s, k, fb);
    j[s][k] = v;
    return v;
  }
  std::string str(const std::string& s, const std::string& k, const std::string& fb) {
    std::string v = c.get_str(s, k, fb);
    j[s][k] = v;
    return v;
  }
  std::string req_str(const std::string& s, const std::string& k) {
    std::string v = c.require_str(s, k);
    j[s][k] = v;
    return v;
  }
  std::vector<double> list(const std::string& s, const std::string& k,
                           const std::vector<double>& fb) {
    auto v = c.get_num_list(s, k, fb);
    j[s][k] = v;
    return v;
  }
};

struct ModelBundle {
  GateModel model;
  bool has_species = false;
  catalog::SpeciesRow row;
  double omega_o_2pi_mhz = 0.0;
};

// [model] section: either a catalog row (species, n, j_2pi_mhz, state_pair)
// at a given omega_o, or direct dimensionless parameters.
ModelBundle read_model(Resolved& r) {
  ModelBundle out;
  if (r.c.has("model", "species")) {
    auto species = catalog::species_from_string(r.req_str("model", "species"));
    int n = r.integer("model", "n", 40);
    double j_mhz = r.num("model", "j_2pi_mhz", 50.0);
    auto pair = catalog::state_pair_from_string(r.str("model", "state_pair", "P-S"));
    out.omega_o_2pi_mhz = r.req_num("model", "omega_o_2pi_mhz");
    out.row = catalog::lookup(species, n, j_mhz, pair);
    out.model = catalog::to_gate_model(out.row, out.omega_o_2pi_mhz);
    out.has_species = true;
  } else {
    out.model.j_exchange = r.num("model", "j_over_omega", 0.0);
    out.model.v11 = r.num("model", "v11", 0.0);
    out.model.v12 = r.num("model", "v12", 0.0);
    out.model.v22 = r.num("model", "v22", 0.0);
    out.model.infinite_j = r.boolean("model", "infinite_j", false);
    out.omega_o_2pi_mhz = r.num("model", "omega_o_2pi_mhz", 0.0);
  }
  out.model.delta_o = r.num("model", "delta_o", 0.0);
  return out;
}

OptimizationPlan read_plan(Resolved& r, const RunContext& ctx) {
  OptimizationPlan plan;
  plan.n_steps = r.integer("plan", "n_steps", 200);
  plan.epsilon = r.num("plan", "epsilon", 1e-3);
  plan.eta0 = r.num("plan", "eta0", 1e-6);
  plan.dT = r.num("plan", "dt_sweep", 0.002);
  plan.k_points = r.integer("plan", "k_points", 15);
  plan.x_max = r.num("plan", "x_max", 0.033);
  plan.delta_t_star = r.num("plan", "delta_t_star", 0.0);
  plan.eta_robust = r.num("plan", "eta_robust", 1e-7);
  plan.max_iters = r.integer("plan", "max_iters", 600);
  plan.grad_tol = r.num("plan", "grad_tol", 1e-9);
  plan.exact_threshold = r.num("plan", "exact_threshold", 1e-6);
  plan.t_ceiling = r.num("plan", "t_ceiling", 9.0);
  plan.restarts = r.integer("plan", "restarts", 8);
  plan.seed = ctx.seed;
  plan.threads = ctx.threads;
  plan.validate();
  return plan;
}

NoiseModel read_noise(Resolved& r, const ModelBundle& mb) {
  NoiseModel noise;
  double omega_mhz = mb.omega_o_2pi_mhz > 0.0 ? mb.omega_o_2pi_mhz
                                              : r.req_num("model", "omega_o_2pi_mhz");
  noise.omega_o_si = 2.0 * kPi * 1e6 * omega_mhz;
  noise.omega_trap = 2.0 * kPi * 1e3 * r.num("noise", "trap_khz", 100.0);
  noise.temperature = 1e-6 * r.num("noise", "temperature_uk", 2.0);
  noise.fock_cutoff = r.integer("noise", "fock_cutoff", 8);
  noise.joint_weight_floor = r.num("noise", "joint_weight_floor", 1e-4);
  if (mb.has_species) {
    noise.mass = catalog::species_mass_kg(mb.row.species);
    noise.lambda_o = catalog::species_lambda_o_m(mb.row.species);
    noise.distance = 1e-6 * mb.row.distance_um;
    noise.gamma_1 = 1.0 / (1e-6 * mb.row.gamma1_inv_us);
    noise.gamma_2 = 1.0 / (1e-6 * mb.row.gamma2_inv_us);
  }
  if (r.c.has("noise", "mass_kg")) noise.mass = r.req_num("noise", "mass_kg");
  if (r.c.has("noise", "distance_um"))
    noise.distance = 1e-6 * r.req_num("noise", "distance_um");
  if (r.c.has("noise", "lambda_o_nm"))
    noise.lambda_o = 1e-9 * r.req_num("noise", "lambda_o_nm");
  noise.lambda_mw = 1e-3 * r.num("noise", "lambda_mw_mm", 6.0);
  if (r.c.has("noise", "gamma1_inv_us"))
    noise.gamma_1 = 1.0 / (1e-6 * r.req_num("noise", "gamma1_inv_us"));
  if (r.c.has("noise", "gamma2_inv_us"))
    noise.gamma_2 = 1.0 / (1e-6 * r.req_num("noise", "gamma2_inv_us"));
  if (r.boolean("noise", "decay_off", false)) noise.gamma_1 = noise.gamma_2 = 0.0;
  noise.validate();
  return noise;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json run_record(const std::string& command, const RunContext& ctx, const json& resolved,
                const json& metrics, const std::vector<std::string>& outputs) {
  return json{{"format_version", io::kFormatVersion},
              {"kind", "run_record"},
              {"command", command},
              {"created_utc", io::utc_timestamp()},
              {"artifact_version", io::kArtifactVersion},
              {"seed", ctx.seed},
              {"threads", ctx.threads},
              {"config", resolved},
              {"metrics", metrics},
              {"outputs", outputs}};
}

void reject_unknown_keys(const cfg::Config& config) {
  auto unknown = config.unconsumed();
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ValidationError(msg);
  }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_optimize(RunContext& ctx) {
  Resolved r{ctx.config};
  std::string kind = r.str("model", "kind", "four_level");
  ModelBundle mb = read_model(r);
  OptimizationPlan plan = read_plan(r, ctx);
  double t_start = r.req_num("plan", "t_start");

  grape::Problem prob;
  prob.model = mb.model;
  prob.n_steps = plan.n_steps;
  prob.total_time = t_start;
  if (kind == "four_level") {
    prob.kind = grape::ModelKind::FourLevel;
  } else if (kind == "effective_vdw") {
    prob.kind = grape::ModelKind::EffectiveVdw;
    prob.model.infinite_j = true;
  } else {
    throw ValidationError("model.kind must be four_level or effective_vdw");
  }
  reject_unknown_keys(ctx.config);

  log_info("optimize: sweeping T from " + std::to_string(t_start));
  auto sweep = grape::time_sweep(prob, plan);

  // Trace CSV.
  std::ostringstream trace_csv;
  trace_csv << "total_time_omega_o,bell_infidelity,eta\n";
  for (const auto& pt : sweep.trace)
    trace_csv << csv_num(pt.total_time) << ',' << csv_num(pt.bell_infidelity) << ','
              << csv_num(pt.eta) << '\n';
  write_text(ctx.out_dir / "infidelity_vs_time.csv", trace_csv.str());

  json metrics;
  std::vector<std::string> outputs = {"run.json", "infidelity_vs_time.csv"};
  metrics["converged"] = sweep.converged;
  metrics["t_star_omega_o"] = sweep.t_star;
  metrics["message"] = sweep.message;
  if (!sweep.trace.empty()) metrics["bell_infidelity"] = sweep.trace.back().bell_infidelity;

  std::ostringstream shape_csv;
  if (prob.kind == grape::ModelKind::FourLevel) {
    Pulse pulse = grape::unpack_four_level(sweep.problem, sweep.params);
    io::write_pulse(ctx.out_dir / "pulse.json", pulse);
    auto traj = prop::evolve(pulse, prob.model);
    metrics["t_rydberg_omega_o"] = prop::rydberg_time(traj);
    metrics["delta_o_omega_o"] = pulse.delta_o;
    metrics["theta_rad"] = pulse.theta;
    VectorXd dmw = statespace::phase_to_detuning(pulse);
    shape_csv << "time_omega_o,phi_mw_rad,omega_mw_omega_o,delta_mw_omega_o\n";
    for (int i = 0; i < pulse.n_steps; ++i)
      shape_csv << csv_num((i + 0.5) * pulse.dt()) << ',' << csv_num(pulse.phi_mw(i)) << ','
                << csv_num(pulse.omega_mw(i)) << ',' << csv_num(dmw(i)) << '\n';
  } else {
    auto controls = grape::unpack_effective(sweep.problem, sweep.params);
    io::write_json_file(ctx.out_dir / "pulse.json", io::to_json(controls));
    auto traj = prop::evolve_effective(controls, 1.0);
    metrics["t_rydberg_omega_o"] = prop::rydberg_time(traj);
    metrics["delta_o_omega_o"] = controls.delta_o;
    metrics["theta_rad"] = controls.theta;
    shape_csv << "time_omega_o,inv_tau_omega_o\n";
    for (int i = 0; i < controls.n_steps; ++i)
      shape_csv << csv_num((i + 0.5) * controls.dt()) << ',' << csv_num(controls.inv_tau(i))
                << '\n';
  }
  write_text(ctx.out_dir / "pulse_shape.csv", shape_csv.str());
  outputs.push_back("pulse.json");
  outputs.push_back("pulse_shape.csv");

  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("optimize", ctx, r.j, metrics, outputs));
  if (!sweep.converged) {
    log_error("optimize: " + sweep.message);
    return kExitNoConvergence;
  }
  log_info("optimize: T* = " + std::to_string(sweep.t_star));
  return kExitOk;
}

int cmd_robustify(RunContext& ctx) {
  Resolved r{ctx.config};
  ModelBundle mb = read_model(r);
  OptimizationPlan plan = read_plan(r, ctx);
  std::string pulse_file = r.req_str("robustify", "pulse_file");
  double plot_span = r.num("robustify", "plot_span", 0.05);
  int plot_points = r.integer("robustify", "plot_points", 51);
  reject_unknown_keys(ctx.config);

  Pulse exact = io::read_pulse(pulse_file);
  auto result = grape::robustify(exact, mb.model, plan);

  VectorXd grid = VectorXd::LinSpaced(plot_points, -plot_span, plot_span);
  auto exact_curve = grape::infidelity_vs_displacement(exact, mb.model, grid);
  auto robust_curve = grape::infidelity_vs_displacement(result.pulse, mb.model, grid);
  std::ostringstream csv;
  csv << "displacement_rel,bell_infidelity_exact,bell_infidelity_robust\n";
  for (int i = 0; i < grid.size(); ++i)
    csv << csv_num(grid(i)) << ',' << csv_num(exact_curve[i]) << ','
        << csv_num(robust_curve[i]) << '\n';
  write_text(ctx.out_dir / "infidelity_vs_displacement.csv", csv.str());

  io::write_pulse(ctx.out_dir / "pulse.json", result.pulse);
  json metrics{{"exact_pulse_robust_cost", result.exact_pulse_robust_cost},
               {"robust_cost", result.robust_cost},
               {"improved", result.improved},
               {"total_time_omega_o", result.pulse.total_time},
               {"optimizer_message", result.info.message}};
  io::write_json_file(
      ctx.out_dir / "run.json",
      run_record("robustify", ctx, r.j, metrics,
                 {"run.json", "pulse.json", "infidelity_vs_displacement.csv"}));
  if (!result.improved) {
    log_error("robustify: robust cost did not improve on the input pulse");
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_simulate(RunContext& ctx) {
  Resolved r{ctx.config};
  ModelBundle mb = read_model(r);
  std::string pulse_file = r.req_str("simulate", "pulse_file");
  NoiseModel noise = read_noise(r, mb);
  noise::SimulateOptions opts;
  opts.threads = ctx.threads;
  opts.verify_cutoff = r.boolean("simulate", "verify_cutoff", false);
  opts.project_initial_motion = r.boolean("simulate", "project_initial_motion", false);
  reject_unknown_keys(ctx.config);

  Pulse pulse = io::read_pulse(pulse_file);
  auto result = noise::simulate_noisy_gate(pulse, mb.model, noise, opts);
  json metrics{{"bell_infidelity", result.infidelity},
               {"n_configs", result.n_configs},
               {"discarded_weight", result.discarded_weight},
               {"boundary_population", result.boundary_population},
               {"norm_growth", result.norm_growth},
               {"converged", result.converged}};
  if (result.cutoff_sensitivity >= 0.0)
    metrics["cutoff_sensitivity"] = result.cutoff_sensitivity;
  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("simulate", ctx, r.j, metrics, {"run.json"}));
  if (!result.converged) {
    log_error("simulate: Fock-cutoff sensitivity above 1e-4");
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_sweep(RunContext& ctx) {
  Resolved r{ctx.config};
  ModelBundle mb = read_model(r);
  NoiseModel noise = read_noise(r, mb);
  std::string axis = r.str("sweep", "axis", "trap_frequency");
  std::vector<double> grid = r.list("sweep", "grid", {});
  std::string files = r.req_str("sweep", "pulse_files");
  noise::SimulateOptions opts;
  opts.threads = ctx.threads;
  reject_unknown_keys(ctx.config);

  std::vector<std::pair<std::string, Pulse>> pulses;
  std::stringstream ss(files);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    pulses.emplace_back(std::filesystem::path(item).stem().string(),
                        io::read_pulse(item));
  }
  if (pulses.empty()) throw ValidationError("sweep.pulse_files lists no pulses");

  std::vector<noise::SweepRow> rows;
  std::string value_header;
  if (axis == "trap_frequency") {
    value_header = "trap_frequency_khz";
    std::vector<double> hz;
    for (double k : grid) hz.push_back(1e3 * k);
    rows = noise::sweep_trap_frequency(pulses, mb.model, noise, hz, opts);
    for (auto& row : rows) row.axis_value /= 1e3;
  } else if (axis == "rabi_frequency") {
    if (!mb.has_species)
      throw ValidationError("sweep.axis = rabi_frequency requires a species model");
    value_header = "omega_o_2pi_mhz";
    rows = noise::sweep_rabi_frequency(pulses, mb.row.j_2pi_mhz, mb.row.v11_over_j,
                                       mb.row.v12_over_j, mb.row.v22_over_j,
                                       mb.row.gamma1_inv_us, mb.row.gamma2_inv_us, noise,
                                       grid, opts);
  } else {
    throw ValidationError("sweep.axis must be trap_frequency or rabi_frequency");
  }

  std::ostringstream csv;
  csv << "pulse_label," << value_header << ",bell_infidelity,status\n";
  int failures = 0;
  for (const auto& row : rows) {
    csv << row.pulse_label << ',' << csv_num(row.axis_value) << ','
        << (row.ok ? csv_num(row.infidelity) : "nan") << ','
        << (row.ok ? "ok" : "failed") << '\n';
    if (!row.ok) ++failures;
  }
  write_text(ctx.out_dir / "sweep.csv", csv.str());
  json metrics{{"rows", static_cast<int>(rows.size())}, {"failures", failures}};
  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("sweep", ctx, r.j, metrics, {"run.json", "sweep.csv"}));
  return failures == 0 ? kExitOk : kExitNoConvergence;
}

int cmd_piecewise(RunContext& ctx) {
  Resolved r{ctx.config};
  protocols::PiecewiseSpec spec;
  std::string branch = r.str("piecewise", "branch", "sqrt3_minus");
  if (branch == "sqrt3_minus") spec.branch = protocols::PiecewiseBranch::sqrt3_minus;
  else if (branch == "sqrt3_plus") spec.branch = protocols::PiecewiseBranch::sqrt3_plus;
  else if (branch == "near_j") spec.branch = protocols::PiecewiseBranch::near_j;
  else throw ValidationError("piecewise.branch must be sqrt3_minus, sqrt3_plus or near_j");
  spec.omega_mw_ratio = r.num("piecewise", "omega_mw_ratio", 10.0);
  spec.j_over_omega = r.num("piecewise", "j_over_omega", 1e7);
  bool finite_j = r.c.has("piecewise", "j_over_omega_mw");
  double j_over_mw = r.num("piecewise", "j_over_omega_mw", 0.0);
  bool always_on = r.boolean("piecewise", "laser_always_on", false);
  int n_steps = r.integer("piecewise", "n_steps", 100);
  reject_unknown_keys(ctx.config);

  auto gate = protocols::piecewise_gate(spec);
  json metrics{{"predicted_time_omega_o", gate.predicted_time},
               {"theta_rad", gate.theta}};
  std::vector<std::string> outputs = {"run.json"};

  GateModel model;
  if (spec.branch == protocols::PiecewiseBranch::near_j) {
    model.j_exchange = spec.j_over_omega;
  } else {
    model.infinite_j = true;
  }
  auto sim = protocols::simulate_sequence(gate.segments, gate.theta, model);
  metrics["bell_infidelity"] = sim.infidelity;
  metrics["total_time_omega_o"] = sim.total_time;
  metrics["t_rydberg_omega_o"] = sim.t_rydberg;

  int exit_code = kExitOk;
  if (finite_j) {
    auto refined = protocols::piecewise_finite_j(spec, j_over_mw, n_steps);
    metrics["finite_j"] = {{"feasible", refined.feasible},
                           {"t_mid_omega_o", refined.t_mid},
                           {"theta_rad", refined.theta},
                           {"bell_infidelity", refined.infidelity},
                           {"message", refined.message}};
    std::ostringstream csv;
    csv << "time_omega_o,delta_mw_omega_o\n";
    for (int i = 0; i < refined.delta_mw.size(); ++i)
      csv << csv_num((i + 0.5) * refined.t_mid / refined.delta_mw.size()) << ','
          << csv_num(refined.delta_mw(i)) << '\n';
    write_text(ctx.out_dir / "middle_detuning.csv", csv.str());
    outputs.push_back("middle_detuning.csv");
    if (!refined.feasible) exit_code = kExitNoConvergence;
    if (always_on && refined.feasible) {
      auto aon = protocols::piecewise_always_on(spec, j_over_mw * spec.omega_mw_ratio,
                                                refined.delta_mw, refined.t_mid);
      metrics["always_on"] = {{"total_time_omega_o", aon.total_time},
                              {"bell_fidelity", aon.fidelity},
                              {"theta_rad", aon.theta}};
    }
  } else if (always_on) {
    auto aon = protocols::piecewise_always_on(spec, spec.j_over_omega);
    metrics["always_on"] = {{"total_time_omega_o", aon.total_time},
                            {"bell_fidelity", aon.fidelity},
                            {"theta_rad", aon.theta}};
  }

  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("piecewise", ctx, r.j, metrics, outputs));
  return exit_code;
}

int cmd_baseline(RunContext& ctx) {
  Resolved r{ctx.config};
  double v = r.req_num("baseline", "v_over_omega");
  double t_start = r.num("baseline", "t_start", 6.2);
  OptimizationPlan plan = read_plan(r, ctx);
  reject_unknown_keys(ctx.config);

  auto result = protocols::vdw_baseline_optimize(v, plan, t_start);
  std::ostringstream csv;
  csv << "branch,t_star_omega_o,t_rydberg_omega_o,bell_infidelity\n";
  for (size_t i = 0; i < result.branches.size(); ++i) {
    const auto& b = result.branches[i];
    csv << i << ',' << csv_num(b.t_star) << ',' << csv_num(b.t_rydberg) << ','
        << csv_num(b.infidelity) << '\n';
  }
  write_text(ctx.out_dir / "branches.csv", csv.str());
  json metrics{{"feasible", result.feasible},
               {"message", result.message},
               {"branches", static_cast<int>(result.branches.size())}};
  std::vector<std::string> outputs = {"run.json", "branches.csv"};
  if (result.feasible) {
    metrics["t_star_omega_o"] = result.branches.front().t_star;
    metrics["t_rydberg_omega_o"] = result.branches.front().t_rydberg;
    io::write_json_file(ctx.out_dir / "pulse.json",
                        io::to_json(result.branches.front().pulse));
    outputs.push_back("pulse.json");
  }
  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("baseline", ctx, r.j, metrics, outputs));
  return result.feasible ? kExitOk : kExitNoConvergence;
}

int cmd_twophoton(RunContext& ctx) {
  Resolved r{ctx.config};
  ModelBundle mb = read_model(r);
  double o1 = r.num("two_photon", "omega1_2pi_mhz", 278.0);
  double o2 = r.num("two_photon", "omega2_2pi_mhz", 278.0);
  double de_mhz = 1e3 * r.num("two_photon", "delta_e_2pi_ghz", 7.75);
  double tau_e_us = 1e-3 * r.num("two_photon", "tau_e_ns", 110.0);
  std::string pulse_file = r.req_str("two_photon", "pulse_file");
  bool with_motion = r.boolean("two_photon", "with_motion", false);
  Pulse base = io::read_pulse(pulse_file);
  // Sign convention delta_e * delta_o < 0.
  bool negative = base.delta_o > 0.0;
  double g1 = mb.has_species ? mb.row.gamma1_inv_us : 0.0;
  double g2 = mb.has_species ? mb.row.gamma2_inv_us : 0.0;
  auto tp = protocols::two_photon_from_lab(o1, o2, de_mhz, tau_e_us, g1, g2, negative);

  auto result = protocols::two_photon_protocol(tp, base, mb.model);
  json metrics{{"omega_eff_over_omega1", 1.0 / tp.omega_1},
               {"delta_e_over_omega1", std::abs(tp.delta_e) / tp.omega_1},
               {"theta_rad", result.theta},
               {"total_time_omega_o", result.total_time},
               {"ideal_infidelity", result.ideal_infidelity},
               {"infidelity_with_decay", result.infidelity}};

  if (with_motion) {
    NoiseModel noise = read_noise(r, mb);
    noise.gamma_1 = noise.gamma_2 = 0.0; // decay carried by the two-photon model
    noise::SimulateOptions opts;
    opts.threads = ctx.threads;
    noise::TwoPhotonLasers lasers;
    lasers.lambda_1 = 1e-9 * r.num("two_photon", "lambda1_nm", 420.0);
    lasers.lambda_2 = 1e-9 * r.num("two_photon", "lambda2_nm", 1013.0);
    lasers.counter_propagating = r.boolean("two_photon", "counter_propagating", true);
    Pulse adjusted = base;
    adjusted.total_time = result.total_time;
    adjusted.theta = result.theta;
    auto noisy = noise::simulate_noisy_gate_two_photon(adjusted, mb.model, tp, noise,
                                                       lasers, opts);
    metrics["noisy_infidelity"] = noisy.infidelity;
    metrics["n_configs"] = noisy.n_configs;
  }
  reject_unknown_keys(ctx.config);
  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("twophoton", ctx, r.j, metrics, {"run.json"}));
  return kExitOk;
}

int cmd_tables(RunContext& ctx) {
  Resolved r{ctx.config};
  write_text(ctx.out_dir / "tables.csv", catalog::tables_csv());
  json metrics{{"rows", static_cast<int>(catalog::all_rows().size())},
               {"checksum", catalog::table_checksum()}};
  if (r.c.has("tables", "species")) {
    auto species = catalog::species_from_string(r.req_str("tables", "species"));
    int n = r.integer("tables", "n", 40);
    double j = r.num("tables", "j_2pi_mhz", 50.0);
    auto pair = catalog::state_pair_from_string(r.str("tables", "state_pair", "P-S"));
    auto row = catalog::lookup(species, n, j, pair);
    std::cout << catalog::to_string(row.species) << " n=" << row.n << " "
              << catalog::to_string(row.state_pair) << ": R = " << row.distance_um
              << " um, J/2pi = " << row.j_2pi_mhz << " MHz, V11/J = " << row.v11_over_j
              << ", V12/J = " << row.v12_over_j << ", V22/J = " << row.v22_over_j
              << ", 1/Gamma1 = " << row.gamma1_inv_us
              << " us, 1/Gamma2 = " << row.gamma2_inv_us << " us\n";
    metrics["lookup"] = {{"species", catalog::to_string(row.species)},
                         {"n", row.n},
                         {"distance_um", row.distance_um},
                         {"v11_over_j", row.v11_over_j}};
  } else {
    std::cout << catalog::tables_csv();
  }
  reject_unknown_keys(ctx.config);
  io::write_json_file(ctx.out_dir / "run.json",
                      run_record("tables", ctx, r.j, metrics, {"run.json", "tables.csv"}));
  return kExitOk;
}

}  // namespace

int run_command(const std::string& command, RunContext& ctx) {
  try {
    std::filesystem::create_directories(ctx.out_dir);
    if (command == "optimize") return cmd_optimize(ctx);
    if (command == "robustify") return cmd_robustify(ctx);
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "sweep") return cmd_sweep(ctx);
    if (command == "piecewise") return cmd_piecewise(ctx);
    if (command == "baseline") return cmd_baseline(ctx);
    if (command == "twophoton") return cmd_twophoton(ctx);
    if (command == "tables") return cmd_tables(ctx);
    log_error("unknown command '" + command + "'");
    return kExitValidation;
  } catch (const ValidationError& e) {
    log_error(e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    log_error(e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    log_error(std::string("unexpected failure: ") + e.what());
    return kExitValidation;
  }
}

}  // namespace forge::runner
