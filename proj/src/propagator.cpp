#include "forge/propagator.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace forge::prop {

namespace {

bool is_hermitian(const MatrixXcd& h, double tol = 1e-12) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, h.cwiseAbs().maxCoeff());
}

SectorTrack make_track(statespace::Sector sector, bool infinite_j) {
  SectorTrack t;
  t.name = sector == statespace::Sector::q01 ? "01" : "11";
  t.labels = statespace::sector_labels(sector);
  if (sector == statespace::Sector::q11 && infinite_j) t.labels.resize(4);
  t.rydberg_weights = statespace::rydberg_weights(sector, infinite_j);
  t.r1_weights = statespace::rydberg_weights_r1(sector, infinite_j);
  t.r2_weights = statespace::rydberg_weights_r2(sector, infinite_j);
  t.multiplicity = sector == statespace::Sector::q01 ? 2 : 1;
  return t;
}

SectorTrack make_effective_track(statespace::Sector sector) {
  SectorTrack t;
  if (sector == statespace::Sector::q01) {
    t.name = "01";
    t.labels = {"0 1", "0 r"};
    t.rydberg_weights = VectorXd(2);
    t.rydberg_weights << 0, 1;
    t.multiplicity = 2;
  } else {
    t.name = "11";
    t.labels = {"1 1", "s 1 r", "r r"};
    t.rydberg_weights = VectorXd(3);
    t.rydberg_weights << 0, 1, 2;
    t.multiplicity = 1;
  }
  t.r1_weights = t.rydberg_weights;
  t.r2_weights = VectorXd::Zero(t.rydberg_weights.size());
  return t;
}

}  // namespace

MatrixXcd step_propagator(const MatrixXcd& h, double dt) {
  require(dt > 0.0, "step_propagator: dt must be > 0");
  if (is_hermitian(h)) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    VectorXcd phases = (-kImag * dt * es.eigenvalues().array()).exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  return (-kImag * dt * h).exp();
}

MatrixXcd step_propagator(const HamiltonianBlock& block, double dt) {
  return step_propagator(block.matrix, dt);
}

Trajectory propagate(const std::function<MatrixXcd(int sector, int step)>& block_at,
                     std::vector<SectorTrack> sector_defs, int n_steps,
                     double total_time) {
  Trajectory traj;
  traj.times.resize(n_steps + 1);
  const double dt = n_steps > 0 ? total_time / n_steps : 0.0;
  for (int k = 0; k <= n_steps; ++k) traj.times[k] = k * dt;
  traj.sectors = std::move(sector_defs);
  for (auto& sector : traj.sectors) {
    VectorXcd psi = VectorXcd::Zero(sector.rydberg_weights.size());
    psi(0) = 1.0; // the computational basis state heads each sector basis
    sector.states.clear();
    sector.states.reserve(n_steps + 1);
    sector.states.push_back(psi);
  }
  if (total_time == 0.0) {
    for (auto& sector : traj.sectors)
      sector.states.assign(n_steps + 1, sector.states.front());
    return traj;
  }
  for (int i = 0; i < n_steps; ++i) {
    for (int s = 0; s < static_cast<int>(traj.sectors.size()); ++s) {
      MatrixXcd u = step_propagator(block_at(s, i), dt);
      traj.sectors[s].states.push_back(u * traj.sectors[s].states.back());
    }
  }
  return traj;
}

Trajectory evolve(const Pulse& pulse, const GateModel& model) {
  pulse.validate();
  model.validate();
  std::vector<SectorTrack> defs = {make_track(statespace::Sector::q01, model.infinite_j),
                                   make_track(statespace::Sector::q11, model.infinite_j)};
  auto block_at = [&](int sector, int i) {
    MatrixXcd h;
    if (sector == 0)
      statespace::lab_block_01(model, pulse.delta_o, pulse.omega_mw(i), pulse.phi_mw(i), h);
    else
      statespace::lab_block_11(model, pulse.delta_o, pulse.omega_mw(i), pulse.phi_mw(i), h);
    return h;
  };
  return propagate(block_at, std::move(defs), pulse.n_steps, pulse.total_time);
}

Trajectory evolve_effective(const EffectiveVdwControls& controls, double omega_o) {
  controls.validate();
  std::vector<SectorTrack> defs = {make_effective_track(statespace::Sector::q01),
                                   make_effective_track(statespace::Sector::q11)};
  auto block_at = [&](int sector, int i) {
    auto [b01, b11] = statespace::build_effective_vdw_blocks(controls, omega_o, i);
    return sector == 0 ? b01.matrix : b11.matrix;
  };
  return propagate(block_at, std::move(defs), controls.n_steps, controls.total_time);
}

Trajectory evolve_baseline(const BaselinePulse& pulse, double v_over_omega,
                           double omega_o) {
  pulse.validate();
  SectorTrack t01;
  t01.name = "01";
  t01.labels = {"0 1", "0 r"};
  t01.rydberg_weights = VectorXd(2);
  t01.rydberg_weights << 0, 1;
  t01.multiplicity = 2;
  SectorTrack t11;
  t11.name = "11";
  t11.labels = {"1 1", "s 1 r", "r r"};
  t11.rydberg_weights = VectorXd(3);
  t11.rydberg_weights << 0, 1, 2;
  t11.multiplicity = 1;
  t01.r1_weights = t01.rydberg_weights;
  t01.r2_weights = VectorXd::Zero(2);
  t11.r1_weights = t11.rydberg_weights;
  t11.r2_weights = VectorXd::Zero(3);
  auto block_at = [&](int sector, int i) {
    cplx c = 0.5 * omega_o * std::exp(kImag * pulse.phi_o(i));
    if (sector == 0) {
      MatrixXcd h = MatrixXcd::Zero(2, 2);
      h(0, 1) = c;
      h(1, 0) = std::conj(c);
      return h;
    }
    MatrixXcd h = MatrixXcd::Zero(3, 3);
    cplx cs = std::sqrt(2.0) * c;
    h(0, 1) = cs;
    h(1, 0) = std::conj(cs);
    h(1, 2) = cs;
    h(2, 1) = std::conj(cs);
    h(2, 2) = v_over_omega * omega_o;
    return h;
  };
  return propagate(block_at, {t01, t11}, pulse.n_steps, pulse.total_time);
}

Trajectory evolve_rotated(const GateModel& model, double omega_mw,
                          const VectorXd& delta_mw, double delta_o,
                          double total_time) {
  model.validate();
  const int n = static_cast<int>(delta_mw.size());
  require(n >= 1, "evolve_rotated: need at least one step");
  GateModel finite = model;
  finite.infinite_j = false;
  finite.delta_o = delta_o;
  if (model.infinite_j) finite.j_exchange = 1.0; // placeholder, projected out below
  std::vector<SectorTrack> defs = {make_track(statespace::Sector::q01, model.infinite_j),
                                   make_track(statespace::Sector::q11, model.infinite_j)};
  auto block_at = [&](int sector, int i) {
    auto s = sector == 0 ? statespace::Sector::q01 : statespace::Sector::q11;
    HamiltonianBlock block = statespace::rotated_frame_block(finite, omega_mw, delta_mw(i), s);
    if (model.infinite_j && s == statespace::Sector::q11)
      block = statespace::project_infinite_j(block);
    return block.matrix;
  };
  return propagate(block_at, std::move(defs), n, total_time);
}

double bell_fidelity(cplx a01, cplx a11, double theta) {
  cplx z = (1.0 + 2.0 * std::exp(-kImag * theta) * a01 -
            std::exp(-2.0 * kImag * theta) * a11) / 4.0;
  return std::norm(z);
}

double bell_fidelity(const Trajectory& trajectory, double theta) {
  return bell_fidelity(trajectory.a01(), trajectory.a11(), theta);
}

namespace {

double rydberg_integral(const Trajectory& traj,
                        const VectorXd& (*weights)(const SectorTrack&)) {
  const auto& times = traj.times;
  const int n = static_cast<int>(times.size()) - 1;
  if (n <= 0) return 0.0;
  double acc = 0.0;
  for (const auto& sector : traj.sectors) {
    const VectorXd& w = weights(sector);
    double integral = 0.0;
    for (int k = 0; k <= n; ++k) {
      double occ = (w.array() * sector.states[k].array().abs2()).sum();
      double trap = (k == 0 || k == n) ? 0.5 : 1.0;
      integral += trap * occ;
    }
    acc += sector.multiplicity * integral * (times[1] - times[0]);
  }
  return acc / 4.0;
}

const VectorXd& all_weights(const SectorTrack& s) { return s.rydberg_weights; }
const VectorXd& r1_only(const SectorTrack& s) { return s.r1_weights; }
const VectorXd& r2_only(const SectorTrack& s) { return s.r2_weights; }

}  // namespace

double rydberg_time(const Trajectory& trajectory) {
  return rydberg_integral(trajectory, all_weights);
}

std::pair<double, double> rydberg_time_split(const Trajectory& trajectory) {
  return {rydberg_integral(trajectory, r1_only), rydberg_integral(trajectory, r2_only)};
}

}  // namespace forge::prop
