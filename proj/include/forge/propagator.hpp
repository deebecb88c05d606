#pragma once

#include <functional>
#include <vector>

#include "forge/statespace.hpp"
#include "forge/types.hpp"

namespace forge::prop {

/// exp(-i H dt). Hermitian blocks use an eigendecomposition, non-Hermitian
/// blocks (decay attached) fall back to a dense matrix exponential.
MatrixXcd step_propagator(const HamiltonianBlock& block, double dt);
MatrixXcd step_propagator(const MatrixXcd& h, double dt);

/// States of one reduced sector at every grid point of a pulse.
struct SectorTrack {
  std::string name;                 // "01" or "11"
  std::vector<std::string> labels;  // block basis labels
  VectorXd rydberg_weights;         // Rydberg atom count per basis state
  VectorXd r1_weights;              // split per Rydberg level
  VectorXd r2_weights;
  int multiplicity = 1;             // 2 for the 01 sector (|01> and |10>)
  std::vector<VectorXcd> states;    // N+1 entries, unit norm without decay
};

struct Trajectory {
  std::vector<double> times;         // N+1 grid points
  std::vector<SectorTrack> sectors;  // [0] = 01, [1] = 11

  cplx a01() const { return sectors.at(0).states.back()(0); }
  cplx a11() const { return sectors.at(1).states.back()(0); }
};

/// Generic piecewise-constant evolution: block_at(sector, step) must return
/// the Hamiltonian of the given sector during step i.
Trajectory propagate(const std::function<MatrixXcd(int sector, int step)>& block_at,
                     std::vector<SectorTrack> sector_defs, int n_steps,
                     double total_time);

/// Evolution of |01> and |11> under a four-level-model pulse (lab frame,
/// explicit microwave phase). |00> acquires no dynamics by construction.
Trajectory evolve(const Pulse& pulse, const GateModel& model);

/// Evolution under the effective time-dependent van der Waals model.
Trajectory evolve_effective(const EffectiveVdwControls& controls, double omega_o);

/// Evolution of the single-Rydberg-state baseline model with laser phase
/// control and blockade strength v (units of omega_o).
Trajectory evolve_baseline(const BaselinePulse& pulse, double v_over_omega,
                           double omega_o = 1.0);

/// Evolution in the detuning frame, driven by microwave detuning samples.
Trajectory evolve_rotated(const GateModel& model, double omega_mw,
                          const VectorXd& delta_mw, double delta_o,
                          double total_time);

/// Bell-state fidelity |<psi_theta|U|++>|^2 assembled from the sector
/// amplitudes a01 = <01|U|01> and a11 = <11|U|11>.
double bell_fidelity(const Trajectory& trajectory, double theta);
double bell_fidelity(cplx a01, cplx a11, double theta);

/// Integrated time spent in the Rydberg manifold, trapezoid rule on the
/// stored grid; |01> and |10> are counted twice.
double rydberg_time(const Trajectory& trajectory);

/// Same integral split per Rydberg level (r1, r2), used for decay estimates.
std::pair<double, double> rydberg_time_split(const Trajectory& trajectory);

}  // namespace forge::prop
