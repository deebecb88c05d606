#pragma once

#include <utility>

#include "forge/types.hpp"

namespace forge::statespace {

// Single-atom basis ordering, fixed for all serialization:
// index 0 = |0>, 1 = |1>, 2 = |r1>, 3 = |r2>. Atom A is the left tensor
// factor, so the pair state |a b> has index 4*a + b.
inline constexpr int kLevels = 4;
inline constexpr int kPairDim = kLevels * kLevels;

enum class Sector { q01, q11 };

const std::vector<std::string>& level_labels();
std::string pair_label(int a, int b);

/// Two-atom Hamiltonian of the driven four-level pair in the frame where the
/// microwave phase appears as an explicit factor exp(i phi_mw) on the
/// |r1><r2| coupling (lab-frame picture). Includes the laser drive and
/// detuning, the flip-flop J term and all four V_ij diagonal shifts.
/// Rejects models with infinite_j set; projection is a separate operation.
HamiltonianBlock build_full_hamiltonian(const GateModel& model, double omega_mw,
                                        double phi_mw);

/// Same Hamiltonian after the transformation that maps the microwave phase
/// to a detuning delta_mw = d(phi_mw)/dt: the coupling becomes real and each
/// atom's |r2> level sits at -delta_o - delta_mw.
HamiltonianBlock build_rotated_hamiltonian(const GateModel& model, double omega_mw,
                                           double delta_mw);

/// Basis labels of the reduced sectors. Sector q01 spans
/// {|01>, |0 r1>, |0 r2>}; sector q11 spans the six exchange-symmetric
/// states {|11>, s|1 r1>, s|1 r2>, |r1 r1>, s|r1 r2>, |r2 r2>}.
const std::vector<std::string>& sector_labels(Sector sector);

/// Isometry from the reduced sector basis into the 16-dimensional pair
/// space (columns are the embedded basis states).
MatrixXcd sector_isometry(Sector sector);

/// Projection of a full 16x16 block onto a reduced sector basis.
HamiltonianBlock project_sector(const HamiltonianBlock& full, Sector sector);

/// Sector block of the detuning-frame Hamiltonian, derived by projecting the
/// full 16x16 matrix (not hand-coded).
HamiltonianBlock rotated_frame_block(const GateModel& model, double omega_mw,
                                     double delta_mw, Sector sector);

/// Restriction of a 11-sector block to the states that survive the J -> inf
/// limit, i.e. without s|r1 r2> and |r2 r2>. Rejects 01-sector blocks.
HamiltonianBlock project_infinite_j(const HamiltonianBlock& block);

/// Discrete derivative of the microwave phase on the midpoint grid:
/// central differences on interior points, one-sided at the two ends.
VectorXd phase_to_detuning(const Pulse& pulse);

/// The 2x2 (01) and 3x3 (11) blocks of the effective time-dependent van der
/// Waals model at one control step.
std::pair<HamiltonianBlock, HamiltonianBlock> build_effective_vdw_blocks(
    const EffectiveVdwControls& controls, double omega_o, int step);

/// Atom-swap operator on the 16-dimensional pair space.
MatrixXcd swap_operator();

// ---------------------------------------------------------------------------
// Fast lab-frame sector builders used in the optimizer hot loop. These are
// hand-written equivalents of project_sector(build_full_hamiltonian(...))
// and are cross-validated against the projection path in the test suite.
// ---------------------------------------------------------------------------

/// 01-sector block over {|01>, |0 r1>, |0 r2>} with explicit phase factor.
void lab_block_01(const GateModel& model, double delta_o, double omega_mw,
                  double phi_mw, MatrixXcd& h);

/// 11-sector block over the six symmetric states (or the first four when
/// model.infinite_j is set).
void lab_block_11(const GateModel& model, double delta_o, double omega_mw,
                  double phi_mw, MatrixXcd& h);

/// Derivatives of the sector blocks with respect to (phi_mw, omega_mw,
/// delta_o), in that order.
void lab_block_01_derivs(const GateModel& model, double omega_mw, double phi_mw,
                         MatrixXcd& d_phi, MatrixXcd& d_omega, MatrixXcd& d_delta);
void lab_block_11_derivs(const GateModel& model, double omega_mw, double phi_mw,
                         MatrixXcd& d_phi, MatrixXcd& d_omega, MatrixXcd& d_delta);

/// Number of Rydberg-excited atoms per basis state of a sector block
/// (weights for the Rydberg-time integrand), plus the split per level.
VectorXd rydberg_weights(Sector sector, bool infinite_j);
VectorXd rydberg_weights_r1(Sector sector, bool infinite_j);
VectorXd rydberg_weights_r2(Sector sector, bool infinite_j);

}  // namespace forge::statespace
