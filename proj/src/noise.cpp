#include "forge/noise.hpp"

#include <cmath>

#include "forge/parallel.hpp"
#include "forge/propagator.hpp"

namespace forge::noise {

namespace {

// ---------------------------------------------------------------------------
// Internal single-atom structure shared by the four-level and five-level
// (two-photon) simulations. Level 0 is the passive qubit state.
// ---------------------------------------------------------------------------
struct LevelCoupling {
  int upper = 0, lower = 0; // |upper><lower| + h.c. after scaling
  double amplitude = 0.0;   // full Rabi frequency (coupling amplitude/2)
  double eta = 0.0;         // Lamb-Dicke parameter of the driving field
};

struct InternalModel {
  int n_levels = 0;
  VectorXcd diagonal;                   // single-atom energies, -i Gamma/2 included
  std::vector<LevelCoupling> static_couplings;
  LevelCoupling microwave;              // amplitude/phase supplied per step
  int r1 = -1, r2 = -1;                 // exchange-coupled pair
  double j_exchange = 0.0;
  double v11 = 0.0, v12 = 0.0, v22 = 0.0;
};

InternalModel four_level_internal(const GateModel& model, const NoiseModel& noise,
                                  double omega_o_si) {
  InternalModel im;
  im.n_levels = 4;
  im.diagonal = VectorXcd::Zero(4);
  im.diagonal(2) = cplx(-model.delta_o, -0.5 * noise.gamma_1 / omega_o_si);
  im.diagonal(3) = cplx(0.0, -0.5 * noise.gamma_2 / omega_o_si);
  im.static_couplings.push_back({2, 1, model.omega_o, noise.eta_o()});
  im.microwave = {3, 2, 1.0, noise.eta_mw()};
  im.r1 = 2;
  im.r2 = 3;
  im.j_exchange = model.j_exchange;
  im.v11 = model.v11;
  im.v12 = model.v12;
  im.v22 = model.v22;
  return im;
}

InternalModel five_level_internal(const GateModel& model, const protocols::TwoPhotonModel& tp,
                                  const NoiseModel& noise, const TwoPhotonLasers& lasers,
                                  double omega_o_si) {
  // Levels {0, 1, e, r1, r2}. Decay rates are carried by the two-photon
  // model in units of omega_eff (= omega_o of the base model).
  InternalModel im;
  im.n_levels = 5;
  im.diagonal = VectorXcd::Zero(5);
  im.diagonal(2) = cplx(-tp.delta_e, -0.5 * tp.gamma_e);
  im.diagonal(3) = cplx(-model.delta_o, -0.5 * tp.gamma_1);
  const double r2_shift = tp.compensate_stark
                              ? 0.25 * tp.omega_2 * tp.omega_2 / (tp.delta_e - model.delta_o)
                              : 0.0;
  im.diagonal(4) = cplx(r2_shift, -0.5 * tp.gamma_2);
  const double x_osc = noise.x_osc();
  const double eta_1 = 2.0 * kPi * x_osc / lasers.lambda_1;
  const double eta_2 = (lasers.counter_propagating ? -1.0 : 1.0) * 2.0 * kPi * x_osc /
                       lasers.lambda_2;
  im.static_couplings.push_back({2, 1, tp.omega_1, eta_1});
  im.static_couplings.push_back({3, 2, tp.omega_2, eta_2});
  im.microwave = {4, 3, 1.0, noise.eta_mw()};
  im.r1 = 3;
  im.r2 = 4;
  im.j_exchange = model.j_exchange;
  im.v11 = model.v11;
  im.v12 = model.v12;
  im.v22 = model.v22;
  (void)omega_o_si;
  return im;
}

// Kinetic energy of a free atom expressed in the trap Fock basis:
// P^2/2m = (omega/4) (2 n + 1 - a^dag a^dag - a a), omega in gate units.
MatrixXcd kinetic_operator(double omega_ratio, int m) {
  MatrixXcd k = MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    k(i, i) = 0.25 * omega_ratio * (2.0 * i + 1.0);
    if (i + 2 < m) {
      double c = -0.25 * omega_ratio * std::sqrt(double(i + 1) * double(i + 2));
      k(i + 2, i) = c;
      k(i, i + 2) = c;
    }
  }
  return k;
}

// Pair basis of one excitation sector.
struct SectorBasis {
  std::vector<std::pair<int, int>> internal_states; // (level_A, level_B)
  int dim_internal() const { return static_cast<int>(internal_states.size()); }
};

SectorBasis sector_basis(int n_levels, int a0, int b0) {
  // All states reachable from (a0, b0): level 0 is frozen, the active
  // ladder {1, ..., n_levels-1} is fully connected by the drives.
  SectorBasis basis;
  auto active = [&](int seed) {
    std::vector<int> levels;
    if (seed == 0)
      levels = {0};
    else
      for (int l = 1; l < n_levels; ++l) levels.push_back(l);
    return levels;
  };
  for (int a : active(a0))
    for (int b : active(b0)) basis.internal_states.push_back({a, b});
  // Put the computational state first for amplitude extraction.
  for (size_t i = 0; i < basis.internal_states.size(); ++i) {
    if (basis.internal_states[i] == std::make_pair(a0, b0)) {
      std::swap(basis.internal_states[0], basis.internal_states[i]);
      break;
    }
  }
  return basis;
}

// Sparse sector generator: a static part plus the microwave term whose
// complex amplitude changes per step.
struct SectorGenerator {
  int dim = 0;
  int m = 0; // Fock cutoff
  SparseXcd h_static;
  SparseXcd w, w_dag; // unit-amplitude microwave raising/lowering parts
  double norm_static = 0.0;
  double norm_w = 0.0;
  cplx shift; // spectral shift applied inside expmv

  void apply(const VectorXcd& x, cplx mw_coeff, VectorXcd& y) const {
    y.noalias() = h_static * x;
    if (mw_coeff != cplx(0.0, 0.0)) {
      y.noalias() += mw_coeff * (w * x);
      y.noalias() += std::conj(mw_coeff) * (w_dag * x);
    }
    y -= shift * x;
  }
  double norm_bound(double omega_mw) const { return norm_static + 2.0 * omega_mw * norm_w; }
};

double one_norm(const SparseXcd& a) {
  VectorXd sums = VectorXd::Zero(a.cols());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseXcd::InnerIterator it(a, k); it; ++it) sums(it.col()) += std::abs(it.value());
  return sums.size() > 0 ? sums.maxCoeff() : 0.0;
}

SectorGenerator build_sector_generator(const InternalModel& im, const SectorBasis& basis,
                                       const NoiseModel& noise, double omega_o_si) {
  const int m = noise.fock_cutoff;
  const int m2 = m * m;
  const int ni = basis.dim_internal();
  SectorGenerator gen;
  gen.m = m;
  gen.dim = ni * m2;

  const double omega_ratio = noise.omega_trap / omega_o_si;
  const double kappa = noise.x_osc() / noise.distance;
  MatrixXcd kin = kinetic_operator(omega_ratio, m);

  std::vector<Eigen::Triplet<cplx>> trip_static, trip_w;
  auto index = [&](int i, int ma, int mb) { return (i * m + ma) * m + mb; };
  auto lookup = [&](int a, int b) {
    for (int i = 0; i < ni; ++i)
      if (basis.internal_states[i] == std::make_pair(a, b)) return i;
    return -1;
  };

  // Free motion and single-atom diagonals (including decay).
  for (int i = 0; i < ni; ++i) {
    auto [a, b] = basis.internal_states[i];
    cplx diag = im.diagonal(a) + im.diagonal(b);
    for (int ma = 0; ma < m; ++ma)
      for (int mb = 0; mb < m; ++mb) {
        trip_static.emplace_back(index(i, ma, mb), index(i, ma, mb), diag);
        for (int ma2 = 0; ma2 < m; ++ma2)
          if (kin(ma2, ma) != cplx(0.0, 0.0))
            trip_static.emplace_back(index(i, ma2, mb), index(i, ma, mb), kin(ma2, ma));
        for (int mb2 = 0; mb2 < m; ++mb2)
          if (kin(mb2, mb) != cplx(0.0, 0.0))
            trip_static.emplace_back(index(i, ma, mb2), index(i, ma, mb), kin(mb2, mb));
      }
  }

  // Recoil-dressed drives: (amp/2) e^{i eta x} |upper><lower| + h.c.
  auto add_coupling = [&](std::vector<Eigen::Triplet<cplx>>& out, const LevelCoupling& c,
                          bool with_hc) {
    MatrixXcd d = displacement_operator(c.eta, m);
    for (int i = 0; i < ni; ++i) {
      auto [a, b] = basis.internal_states[i];
      // atom A transition
      if (a == c.lower) {
        int j = lookup(c.upper, b);
        if (j >= 0)
          for (int ma = 0; ma < m; ++ma)
            for (int ma2 = 0; ma2 < m; ++ma2)
              for (int mb = 0; mb < m; ++mb) {
                cplx v = 0.5 * c.amplitude * d(ma2, ma);
                out.emplace_back(index(j, ma2, mb), index(i, ma, mb), v);
                if (with_hc)
                  out.emplace_back(index(i, ma, mb), index(j, ma2, mb), std::conj(v));
              }
      }
      // atom B transition
      if (b == c.lower) {
        int j = lookup(a, c.upper);
        if (j >= 0)
          for (int mb = 0; mb < m; ++mb)
            for (int mb2 = 0; mb2 < m; ++mb2)
              for (int ma = 0; ma < m; ++ma) {
                cplx v = 0.5 * c.amplitude * d(mb2, mb);
                out.emplace_back(index(j, ma, mb2), index(i, ma, mb), v);
                if (with_hc)
                  out.emplace_back(index(i, ma, mb), index(j, ma, mb2), std::conj(v));
              }
      }
    }
  };
  for (const auto& c : im.static_couplings) add_coupling(trip_static, c, true);
  add_coupling(trip_w, im.microwave, false);

  // Distance-modulated interactions: factors (1 - s kappa (X_A - X_B)).
  auto add_pair_term = [&](int ia, int ib, int ja, int jb, double strength,
                           double slope_factor) {
    int i = lookup(ia, ib);
    int j = lookup(ja, jb);
    if (i < 0 || j < 0 || strength == 0.0) return;
    for (int ma = 0; ma < m; ++ma)
      for (int mb = 0; mb < m; ++mb) {
        trip_static.emplace_back(index(j, ma, mb), index(i, ma, mb), strength);
        // -s kappa strength (X_A - X_B), X = a + a^dag
        double c = -slope_factor * kappa * strength;
        if (ma + 1 < m) {
          double x = std::sqrt(double(ma + 1));
          trip_static.emplace_back(index(j, ma + 1, mb), index(i, ma, mb), c * x);
          trip_static.emplace_back(index(j, ma, mb), index(i, ma + 1, mb), c * x);
        }
        if (mb + 1 < m) {
          double x = std::sqrt(double(mb + 1));
          trip_static.emplace_back(index(j, ma, mb + 1), index(i, ma, mb), -c * x);
          trip_static.emplace_back(index(j, ma, mb), index(i, ma, mb + 1), -c * x);
        }
      }
  };
  add_pair_term(im.r1, im.r2, im.r2, im.r1, im.j_exchange, 3.0);
  add_pair_term(im.r2, im.r1, im.r1, im.r2, im.j_exchange, 3.0);
  add_pair_term(im.r1, im.r1, im.r1, im.r1, im.v11, 6.0);
  add_pair_term(im.r1, im.r2, im.r1, im.r2, im.v12, 6.0);
  add_pair_term(im.r2, im.r1, im.r2, im.r1, im.v12, 6.0);
  add_pair_term(im.r2, im.r2, im.r2, im.r2, im.v22, 6.0);

  gen.h_static.resize(gen.dim, gen.dim);
  gen.h_static.setFromTriplets(trip_static.begin(), trip_static.end());
  gen.w.resize(gen.dim, gen.dim);
  gen.w.setFromTriplets(trip_w.begin(), trip_w.end());
  gen.w_dag = SparseXcd(gen.w.adjoint());
  // Spectral shift: mean of the diagonal reduces the Taylor substep count
  // when the spectrum is offset (two-photon intermediate state).
  cplx trace = 0.0;
  for (int i = 0; i < gen.dim; ++i) trace += gen.h_static.coeff(i, i);
  gen.shift = trace / double(gen.dim);
  gen.norm_static = one_norm(gen.h_static) + std::abs(gen.shift);
  gen.norm_w = one_norm(gen.w);
  return gen;
}

// y = exp(-i dt (H - shift)) x scaled by exp(-i dt shift), via Taylor
// series with norm-based substepping.
void expmv(const SectorGenerator& gen, cplx mw_coeff, double omega_mw, double dt,
           VectorXcd& v) {
  const double norm = gen.norm_bound(omega_mw) * dt;
  const int substeps = std::max(1, static_cast<int>(std::ceil(norm / 1.0)));
  const double h = dt / substeps;
  VectorXcd term(v.size()), tmp(v.size());
  for (int s = 0; s < substeps; ++s) {
    term = v;
    double vnorm = v.norm();
    for (int k = 1; k <= 60; ++k) {
      gen.apply(term, mw_coeff, tmp);
      term = (-kImag * h / double(k)) * tmp;
      v += term;
      if (term.norm() <= 1e-14 * std::max(vnorm, 1e-300)) break;
    }
    v *= std::exp(-kImag * h * gen.shift);
  }
}

struct ThermalConfig {
  int na = 0, nb = 0;
  double weight = 0.0;
};

std::vector<ThermalConfig> thermal_configs(const NoiseModel& noise) {
  VectorXd w = thermal_weights(noise);
  std::vector<ThermalConfig> configs;
  for (int a = 0; a < w.size(); ++a)
    for (int b = 0; b < w.size(); ++b)
      if (w(a) * w(b) >= noise.joint_weight_floor)
        configs.push_back({a, b, w(a) * w(b)});
  return configs;
}

struct SectorRun {
  VectorXcd chi;        // motional-space amplitude of the computational state
  double norm_growth = 0.0;
  double boundary = 0.0;
};

SectorRun run_sector(const SectorGenerator& gen, const Pulse& pulse, int na, int nb) {
  const int m = gen.m;
  VectorXcd v = VectorXcd::Zero(gen.dim);
  v((0 * m + na) * m + nb) = 1.0;
  const double dt = pulse.dt();
  SectorRun out;
  double prev_norm = 1.0;
  for (int i = 0; i < pulse.n_steps; ++i) {
    cplx coeff = 0.5 * pulse.omega_mw(i) * std::exp(kImag * pulse.phi_mw(i));
    expmv(gen, coeff, pulse.omega_mw(i), dt, v);
    double norm = v.norm();
    out.norm_growth = std::max(out.norm_growth, norm - prev_norm);
    prev_norm = norm;
  }
  out.chi = v.segment(0, m * m);
  // Occupation of the top Fock level of either atom, summed over internal
  // states: a cutoff-quality diagnostic.
  for (int i = 0; i < gen.dim / (m * m); ++i)
    for (int ma = 0; ma < m; ++ma)
      for (int mb = 0; mb < m; ++mb)
        if (ma == m - 1 || mb == m - 1)
          out.boundary += std::norm(v((i * m + ma) * m + mb));
  return out;
}

NoisyResult simulate_internal(const InternalModel& im, const Pulse& pulse,
                              const NoiseModel& noise, double omega_o_si,
                              const SimulateOptions& options) {
  pulse.validate();
  noise.validate();
  const int m = noise.fock_cutoff;
  const int m2 = m * m;

  SectorBasis b01 = sector_basis(im.n_levels, 0, 1);
  SectorBasis b10 = sector_basis(im.n_levels, 1, 0);
  SectorBasis b11 = sector_basis(im.n_levels, 1, 1);
  SectorGenerator g01 = build_sector_generator(im, b01, noise, omega_o_si);
  SectorGenerator g10 = build_sector_generator(im, b10, noise, omega_o_si);
  SectorGenerator g11 = build_sector_generator(im, b11, noise, omega_o_si);

  // |00> evolves under free motion only.
  const double omega_ratio = noise.omega_trap / omega_o_si;
  MatrixXcd kin = kinetic_operator(omega_ratio, m);
  MatrixXcd u00_single = pulse.total_time > 0.0
                             ? prop::step_propagator(kin, pulse.total_time)
                             : MatrixXcd::Identity(m, m);

  auto configs = thermal_configs(noise);
  std::vector<double> fid(configs.size());
  std::vector<double> norm_growth(configs.size());
  std::vector<double> boundary(configs.size());
  parallel_for(static_cast<int>(configs.size()), options.threads, [&](int c) {
    const auto& cfg = configs[c];
    SectorRun r01 = run_sector(g01, pulse, cfg.na, cfg.nb);
    SectorRun r10 = run_sector(g10, pulse, cfg.na, cfg.nb);
    SectorRun r11 = run_sector(g11, pulse, cfg.na, cfg.nb);
    VectorXcd chi00(m2);
    VectorXcd ua = u00_single.col(cfg.na);
    VectorXcd ub = u00_single.col(cfg.nb);
    for (int ma = 0; ma < m; ++ma)
      for (int mb = 0; mb < m; ++mb) chi00(ma * m + mb) = ua(ma) * ub(mb);
    const cplx e1 = std::exp(-kImag * pulse.theta);
    const cplx e2 = std::exp(-2.0 * kImag * pulse.theta);
    VectorXcd overlap = (chi00 + e1 * r01.chi + e1 * r10.chi - e2 * r11.chi) / 4.0;
    if (options.project_initial_motion) {
      cplx amp = overlap(cfg.na * m + cfg.nb);
      fid[c] = std::norm(amp);
    } else {
      fid[c] = overlap.squaredNorm();
    }
    norm_growth[c] = std::max({r01.norm_growth, r10.norm_growth, r11.norm_growth});
    boundary[c] = std::max({r01.boundary, r10.boundary, r11.boundary});
  });

  NoisyResult out;
  double total_weight = 0.0, total_fid = 0.0;
  for (size_t c = 0; c < configs.size(); ++c) {
    total_weight += configs[c].weight;
    total_fid += configs[c].weight * fid[c];
    out.norm_growth = std::max(out.norm_growth, norm_growth[c]);
    out.boundary_population = std::max(out.boundary_population, boundary[c]);
  }
  out.fidelity = total_fid / total_weight;
  out.infidelity = 1.0 - out.fidelity;
  out.n_configs = static_cast<int>(configs.size());
  out.discarded_weight = 1.0 - total_weight;
  return out;
}

}  // namespace

VectorXd thermal_weights(const NoiseModel& noise) {
  noise.validate();
  const int m = noise.fock_cutoff;
  VectorXd w(m);
  if (noise.temperature <= 0.0) {
    w.setZero();
    w(0) = 1.0;
    return w;
  }
  const double beta_homega = kHbar * noise.omega_trap / (kBoltzmann * noise.temperature);
  for (int n = 0; n < m; ++n) w(n) = std::exp(-beta_homega * n);
  w /= w.sum();
  return w;
}

double mean_occupation(const NoiseModel& noise) {
  if (noise.temperature <= 0.0) return 0.0;
  const double beta_homega = kHbar * noise.omega_trap / (kBoltzmann * noise.temperature);
  return 1.0 / std::expm1(beta_homega);
}

MatrixXcd displacement_operator(double eta, int cutoff) {
  require(cutoff >= 1, "displacement_operator: cutoff must be >= 1");
  MatrixXd x = MatrixXd::Zero(cutoff, cutoff);
  for (int i = 0; i + 1 < cutoff; ++i) {
    x(i, i + 1) = std::sqrt(double(i + 1));
    x(i + 1, i) = std::sqrt(double(i + 1));
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(x);
  VectorXcd phases = (kImag * eta * es.eigenvalues().array()).exp();
  return es.eigenvectors().cast<cplx>() * phases.asDiagonal() *
         es.eigenvectors().transpose().cast<cplx>();
}

SparseXcd build_noisy_generator(const GateModel& model, const NoiseModel& noise,
                                double omega_mw, double phi_mw) {
  model.validate();
  noise.validate();
  InternalModel im = four_level_internal(model, noise, noise.omega_o_si);
  // Full product basis: all 16 internal pair states.
  SectorBasis full;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) full.internal_states.push_back({a, b});
  SectorGenerator gen = build_sector_generator(im, full, noise, noise.omega_o_si);
  cplx coeff = 0.5 * omega_mw * std::exp(kImag * phi_mw);
  SparseXcd h = gen.h_static + coeff * gen.w;
  h += std::conj(coeff) * gen.w_dag;
  return h;
}

NoisyResult simulate_noisy_gate(const Pulse& pulse, const GateModel& model,
                                const NoiseModel& noise, const SimulateOptions& options) {
  model.validate();
  noise.validate();
  InternalModel im = four_level_internal(model, noise, noise.omega_o_si);
  NoisyResult out = simulate_internal(im, pulse, noise, noise.omega_o_si, options);
  if (options.verify_cutoff && noise.fock_cutoff > 3) {
    NoiseModel smaller = noise;
    smaller.fock_cutoff = noise.fock_cutoff - 2;
    SimulateOptions opts2 = options;
    opts2.verify_cutoff = false;
    NoisyResult ref = simulate_internal(four_level_internal(model, smaller, noise.omega_o_si),
                                        pulse, smaller, noise.omega_o_si, opts2);
    out.cutoff_sensitivity = std::abs(out.infidelity - ref.infidelity);
    out.converged = out.cutoff_sensitivity <= 1e-4;
  }
  return out;
}

NoisyResult simulate_noisy_gate_two_photon(const Pulse& pulse, const GateModel& model,
                                           const protocols::TwoPhotonModel& tp,
                                           const NoiseModel& noise,
                                           const TwoPhotonLasers& lasers,
                                           const SimulateOptions& options) {
  model.validate();
  noise.validate();
  tp.validate();
  InternalModel im = five_level_internal(model, tp, noise, lasers, noise.omega_o_si);
  NoisyResult out = simulate_internal(im, pulse, noise, noise.omega_o_si, options);
  if (options.verify_cutoff && noise.fock_cutoff > 3) {
    NoiseModel smaller = noise;
    smaller.fock_cutoff = noise.fock_cutoff - 2;
    SimulateOptions opts2 = options;
    opts2.verify_cutoff = false;
    NoisyResult ref = simulate_internal(
        five_level_internal(model, tp, smaller, lasers, noise.omega_o_si), pulse, smaller,
        noise.omega_o_si, opts2);
    out.cutoff_sensitivity = std::abs(out.infidelity - ref.infidelity);
    out.converged = out.cutoff_sensitivity <= 1e-4;
  }
  return out;
}

std::vector<SweepRow> sweep_trap_frequency(
    const std::vector<std::pair<std::string, Pulse>>& pulses, const GateModel& model,
    const NoiseModel& base, const std::vector<double>& trap_frequencies_hz,
    const SimulateOptions& options) {
  std::vector<SweepRow> rows;
  for (double f : trap_frequencies_hz) {
    for (const auto& [label, pulse] : pulses) {
      SweepRow row;
      row.pulse_label = label;
      row.axis_value = f;
      try {
        NoiseModel noise = base;
        noise.omega_trap = 2.0 * kPi * f;
        row.infidelity = simulate_noisy_gate(pulse, model, noise, options).infidelity;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_rabi_frequency(
    const std::vector<std::pair<std::string, Pulse>>& pulses, double j_2pi_mhz,
    double v11_over_j, double v12_over_j, double v22_over_j, double gamma1_inv_us,
    double gamma2_inv_us, const NoiseModel& base,
    const std::vector<double>& omega_o_2pi_mhz, const SimulateOptions& options) {
  std::vector<SweepRow> rows;
  for (double f : omega_o_2pi_mhz) {
    for (const auto& [label, pulse] : pulses) {
      SweepRow row;
      row.pulse_label = label;
      row.axis_value = f;
      try {
        GateModel m;
        m.j_exchange = j_2pi_mhz / f;
        m.v11 = v11_over_j * m.j_exchange;
        m.v12 = v12_over_j * m.j_exchange;
        m.v22 = v22_over_j * m.j_exchange;
        m.delta_o = pulse.delta_o;
        NoiseModel noise = base;
        noise.omega_o_si = 2.0 * kPi * 1e6 * f;
        noise.gamma_1 = 1.0 / (gamma1_inv_us * 1e-6);
        noise.gamma_2 = 1.0 / (gamma2_inv_us * 1e-6);
        row.infidelity = simulate_noisy_gate(pulse, m, noise, options).infidelity;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace forge::noise
