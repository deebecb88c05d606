#include "forge/statespace.hpp"

#include <array>
#include <cmath>

namespace forge::statespace {

namespace {

constexpr int kQ0 = 0, kQ1 = 1, kR1 = 2, kR2 = 3;

int pair_index(int a, int b) { return kLevels * a + b; }

// Adds c * |bra><ket| + conj(c) * |ket><bra| acting on one atom of the pair.
void add_single_atom_coupling(MatrixXcd& h, int atom, int bra, int ket, cplx c) {
  for (int spec = 0; spec < kLevels; ++spec) {
    int i = atom == 0 ? pair_index(bra, spec) : pair_index(spec, bra);
    int j = atom == 0 ? pair_index(ket, spec) : pair_index(spec, ket);
    h(i, j) += c;
    h(j, i) += std::conj(c);
  }
}

void add_single_atom_diagonal(MatrixXcd& h, int atom, int level, double e) {
  for (int spec = 0; spec < kLevels; ++spec) {
    int i = atom == 0 ? pair_index(level, spec) : pair_index(spec, level);
    h(i, i) += e;
  }
}

MatrixXcd assemble(const GateModel& model, double omega_mw, cplx mw_coupling,
                   double r2_shift) {
  MatrixXcd h = MatrixXcd::Zero(kPairDim, kPairDim);
  for (int atom = 0; atom < 2; ++atom) {
    add_single_atom_coupling(h, atom, kQ1, kR1, cplx(model.omega_o / 2.0, 0.0));
    add_single_atom_diagonal(h, atom, kR1, -model.delta_o);
    if (omega_mw != 0.0) add_single_atom_coupling(h, atom, kR1, kR2, mw_coupling);
    if (r2_shift != 0.0) add_single_atom_diagonal(h, atom, kR2, r2_shift);
  }
  int r1r2 = pair_index(kR1, kR2);
  int r2r1 = pair_index(kR2, kR1);
  h(r1r2, r2r1) += model.j_exchange;
  h(r2r1, r1r2) += model.j_exchange;
  h(pair_index(kR1, kR1), pair_index(kR1, kR1)) += model.v11;
  h(r1r2, r1r2) += model.v12;
  h(r2r1, r2r1) += model.v12;
  h(pair_index(kR2, kR2), pair_index(kR2, kR2)) += model.v22;
  return h;
}

std::vector<std::string> make_pair_labels() {
  std::vector<std::string> labels;
  labels.reserve(kPairDim);
  for (int a = 0; a < kLevels; ++a)
    for (int b = 0; b < kLevels; ++b) labels.push_back(pair_label(a, b));
  return labels;
}

}  // namespace

const std::vector<std::string>& level_labels() {
  static const std::vector<std::string> labels = {"0", "1", "r1", "r2"};
  return labels;
}

std::string pair_label(int a, int b) {
  return level_labels()[a] + " " + level_labels()[b];
}

HamiltonianBlock build_full_hamiltonian(const GateModel& model, double omega_mw,
                                        double phi_mw) {
  model.validate();
  require(!model.infinite_j,
          "build_full_hamiltonian: infinite_j models have no finite 16x16 form; "
          "use project_infinite_j on a sector block instead");
  require(std::isfinite(omega_mw) && std::isfinite(phi_mw),
          "build_full_hamiltonian: controls must be finite");
  cplx mw = 0.5 * omega_mw * std::exp(kImag * phi_mw);
  return {make_pair_labels(), assemble(model, omega_mw, mw, 0.0)};
}

HamiltonianBlock build_rotated_hamiltonian(const GateModel& model, double omega_mw,
                                           double delta_mw) {
  model.validate();
  require(!model.infinite_j,
          "build_rotated_hamiltonian: infinite_j models have no finite 16x16 form");
  return {make_pair_labels(),
          assemble(model, omega_mw, cplx(0.5 * omega_mw, 0.0),
                   -model.delta_o - delta_mw)};
}

const std::vector<std::string>& sector_labels(Sector sector) {
  static const std::vector<std::string> l01 = {"0 1", "0 r1", "0 r2"};
  static const std::vector<std::string> l11 = {"1 1",    "s 1 r1", "s 1 r2",
                                               "r1 r1",  "s r1 r2", "r2 r2"};
  return sector == Sector::q01 ? l01 : l11;
}

MatrixXcd sector_isometry(Sector sector) {
  const double s = 1.0 / std::sqrt(2.0);
  if (sector == Sector::q01) {
    MatrixXcd p = MatrixXcd::Zero(kPairDim, 3);
    p(pair_index(kQ0, kQ1), 0) = 1.0;
    p(pair_index(kQ0, kR1), 1) = 1.0;
    p(pair_index(kQ0, kR2), 2) = 1.0;
    return p;
  }
  MatrixXcd p = MatrixXcd::Zero(kPairDim, 6);
  p(pair_index(kQ1, kQ1), 0) = 1.0;
  p(pair_index(kQ1, kR1), 1) = s;
  p(pair_index(kR1, kQ1), 1) = s;
  p(pair_index(kQ1, kR2), 2) = s;
  p(pair_index(kR2, kQ1), 2) = s;
  p(pair_index(kR1, kR1), 3) = 1.0;
  p(pair_index(kR1, kR2), 4) = s;
  p(pair_index(kR2, kR1), 4) = s;
  p(pair_index(kR2, kR2), 5) = 1.0;
  return p;
}

HamiltonianBlock project_sector(const HamiltonianBlock& full, Sector sector) {
  require(full.dim() == kPairDim, "project_sector: expected a 16x16 block");
  MatrixXcd p = sector_isometry(sector);
  return {sector_labels(sector), p.adjoint() * full.matrix * p};
}

HamiltonianBlock rotated_frame_block(const GateModel& model, double omega_mw,
                                     double delta_mw, Sector sector) {
  return project_sector(build_rotated_hamiltonian(model, omega_mw, delta_mw), sector);
}

HamiltonianBlock project_infinite_j(const HamiltonianBlock& block) {
  require(block.dim() == 6 && block.labels == sector_labels(Sector::q11),
          "project_infinite_j: expected a 6-level 11-sector block");
  HamiltonianBlock out;
  out.labels = {block.labels[0], block.labels[1], block.labels[2], block.labels[3]};
  out.matrix = block.matrix.topLeftCorner(4, 4);
  return out;
}

VectorXd phase_to_detuning(const Pulse& pulse) {
  pulse.validate();
  require(pulse.n_steps >= 2, "phase_to_detuning: n_steps must be >= 2");
  const int n = pulse.n_steps;
  const double dt = pulse.dt();
  VectorXd d(n);
  d(0) = (pulse.phi_mw(1) - pulse.phi_mw(0)) / dt;
  d(n - 1) = (pulse.phi_mw(n - 1) - pulse.phi_mw(n - 2)) / dt;
  for (int i = 1; i < n - 1; ++i)
    d(i) = (pulse.phi_mw(i + 1) - pulse.phi_mw(i - 1)) / (2.0 * dt);
  return d;
}

std::pair<HamiltonianBlock, HamiltonianBlock> build_effective_vdw_blocks(
    const EffectiveVdwControls& controls, double omega_o, int step) {
  controls.validate();
  require(step >= 0 && step < controls.n_steps,
          "build_effective_vdw_blocks: step out of range");
  const double u = controls.inv_tau(step); // 1/tau
  const double shifted = -controls.delta_o + 0.25 * u;
  HamiltonianBlock b01{{"0 1", "0 r"}, MatrixXcd::Zero(2, 2)};
  b01.matrix(0, 1) = omega_o / 2.0;
  b01.matrix(1, 0) = omega_o / 2.0;
  b01.matrix(1, 1) = shifted;
  HamiltonianBlock b11{{"1 1", "s 1 r", "r r"}, MatrixXcd::Zero(3, 3)};
  const double c = omega_o / std::sqrt(2.0);
  b11.matrix(0, 1) = c;
  b11.matrix(1, 0) = c;
  b11.matrix(1, 2) = c;
  b11.matrix(2, 1) = c;
  b11.matrix(1, 1) = shifted;
  b11.matrix(2, 2) = -2.0 * controls.delta_o;
  return {std::move(b01), std::move(b11)};
}

MatrixXcd swap_operator() {
  MatrixXcd s = MatrixXcd::Zero(kPairDim, kPairDim);
  for (int a = 0; a < kLevels; ++a)
    for (int b = 0; b < kLevels; ++b) s(pair_index(b, a), pair_index(a, b)) = 1.0;
  return s;
}

void lab_block_01(const GateModel& model, double delta_o, double omega_mw,
                  double phi_mw, MatrixXcd& h) {
  h = MatrixXcd::Zero(3, 3);
  cplx mw = 0.5 * omega_mw * std::exp(kImag * phi_mw);
  h(0, 1) = model.omega_o / 2.0;
  h(1, 0) = model.omega_o / 2.0;
  h(1, 1) = -delta_o;
  h(1, 2) = mw;
  h(2, 1) = std::conj(mw);
}

void lab_block_11(const GateModel& model, double delta_o, double omega_mw,
                  double phi_mw, MatrixXcd& h) {
  const int n = model.infinite_j ? 4 : 6;
  h = MatrixXcd::Zero(n, n);
  const double c = model.omega_o / 2.0;
  const double rt2 = std::sqrt(2.0);
  cplx mw = 0.5 * omega_mw * std::exp(kImag * phi_mw);
  h(0, 1) = rt2 * c;
  h(1, 0) = rt2 * c;
  h(1, 1) = -delta_o;
  h(1, 2) = mw;
  h(2, 1) = std::conj(mw);
  h(1, 3) = rt2 * c;
  h(3, 1) = rt2 * c;
  h(3, 3) = -2.0 * delta_o + model.v11;
  if (!model.infinite_j) {
    h(2, 4) = c;
    h(4, 2) = c;
    h(3, 4) = rt2 * mw;
    h(4, 3) = std::conj(rt2 * mw);
    h(4, 4) = -delta_o + model.v12 + model.j_exchange;
    h(4, 5) = rt2 * mw;
    h(5, 4) = std::conj(rt2 * mw);
    h(5, 5) = model.v22;
  }
}

void lab_block_01_derivs(const GateModel& model, double omega_mw, double phi_mw,
                         MatrixXcd& d_phi, MatrixXcd& d_omega, MatrixXcd& d_delta) {
  (void)model;
  cplx e = std::exp(kImag * phi_mw);
  d_phi = MatrixXcd::Zero(3, 3);
  d_phi(1, 2) = kImag * 0.5 * omega_mw * e;
  d_phi(2, 1) = std::conj(d_phi(1, 2));
  d_omega = MatrixXcd::Zero(3, 3);
  d_omega(1, 2) = 0.5 * e;
  d_omega(2, 1) = std::conj(d_omega(1, 2));
  d_delta = MatrixXcd::Zero(3, 3);
  d_delta(1, 1) = -1.0;
}

void lab_block_11_derivs(const GateModel& model, double omega_mw, double phi_mw,
                         MatrixXcd& d_phi, MatrixXcd& d_omega, MatrixXcd& d_delta) {
  const int n = model.infinite_j ? 4 : 6;
  const double rt2 = std::sqrt(2.0);
  cplx e = std::exp(kImag * phi_mw);
  cplx dphi = kImag * 0.5 * omega_mw * e;
  d_phi = MatrixXcd::Zero(n, n);
  d_omega = MatrixXcd::Zero(n, n);
  d_delta = MatrixXcd::Zero(n, n);
  d_phi(1, 2) = dphi;
  d_phi(2, 1) = std::conj(dphi);
  d_omega(1, 2) = 0.5 * e;
  d_omega(2, 1) = std::conj(d_omega(1, 2));
  d_delta(1, 1) = -1.0;
  d_delta(3, 3) = -2.0;
  if (!model.infinite_j) {
    d_phi(3, 4) = rt2 * dphi;
    d_phi(4, 3) = std::conj(d_phi(3, 4));
    d_phi(4, 5) = rt2 * dphi;
    d_phi(5, 4) = std::conj(d_phi(4, 5));
    d_omega(3, 4) = rt2 * 0.5 * e;
    d_omega(4, 3) = std::conj(d_omega(3, 4));
    d_omega(4, 5) = rt2 * 0.5 * e;
    d_omega(5, 4) = std::conj(d_omega(4, 5));
    d_delta(4, 4) = -1.0;
  }
}

VectorXd rydberg_weights(Sector sector, bool infinite_j) {
  if (sector == Sector::q01) {
    VectorXd w(3);
    w << 0, 1, 1;
    return w;
  }
  if (infinite_j) {
    VectorXd w(4);
    w << 0, 1, 1, 2;
    return w;
  }
  VectorXd w(6);
  w << 0, 1, 1, 2, 2, 2;
  return w;
}

VectorXd rydberg_weights_r1(Sector sector, bool infinite_j) {
  if (sector == Sector::q01) {
    VectorXd w(3);
    w << 0, 1, 0;
    return w;
  }
  if (infinite_j) {
    VectorXd w(4);
    w << 0, 1, 0, 2;
    return w;
  }
  VectorXd w(6);
  w << 0, 1, 0, 2, 1, 0;
  return w;
}

VectorXd rydberg_weights_r2(Sector sector, bool infinite_j) {
  if (sector == Sector::q01) {
    VectorXd w(3);
    w << 0, 0, 1;
    return w;
  }
  if (infinite_j) {
    VectorXd w(4);
    w << 0, 0, 1, 0;
    return w;
  }
  VectorXd w(6);
  w << 0, 0, 1, 0, 1, 2;
  return w;
}

}  // namespace forge::statespace
