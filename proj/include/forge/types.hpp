#pragma once

#include <string>
#include <vector>

#include "forge/common.hpp"

namespace forge {

/// Physical parameters of the two-atom four-level gate Hamiltonian.
/// All energies are in units of the optical Rabi frequency (omega_o = 1
/// internally); times are in 1/omega_o.
struct GateModel {
  double omega_o = 1.0;    // optical Rabi frequency (defines the unit)
  double delta_o = 0.0;    // optical detuning
  double j_exchange = 0.0; // resonant dipole-dipole (flip-flop) strength J
  double v11 = 0.0;        // van der Waals shifts V_ij
  double v12 = 0.0;        // applied to both |r1 r2> and |r2 r1>
  double v22 = 0.0;
  bool infinite_j = false; // project out {|r1 r2>, |r2 r1>, |r2 r2>}

  void validate() const {
    require(omega_o >= 0.0, "GateModel: omega_o must be non-negative");
    require(infinite_j || j_exchange > 0.0 || (v11 == 0.0 && v12 == 0.0 && v22 == 0.0 && j_exchange == 0.0),
            "GateModel: j_exchange must be > 0 when infinite_j is false");
  }
};

/// Piecewise-constant microwave controls on the midpoint grid
/// t_i = (i + 1/2) T/N, plus the two scalar parameters of the gate.
struct Pulse {
  int n_steps = 0;
  double total_time = 0.0; // T, units of 1/omega_o
  VectorXd phi_mw;         // microwave phase samples (rad)
  VectorXd omega_mw;       // microwave amplitude samples (>= 0)
  double delta_o = 0.0;    // optical detuning (constant over the pulse)
  double theta = 0.0;      // single-qubit angle of the target CZ(theta)

  double dt() const { return n_steps > 0 ? total_time / n_steps : 0.0; }

  void validate() const {
    require(n_steps >= 1, "Pulse: n_steps must be >= 1");
    require(total_time >= 0.0, "Pulse: total_time must be >= 0");
    require(phi_mw.size() == n_steps, "Pulse: phi_mw length != n_steps");
    require(omega_mw.size() == n_steps, "Pulse: omega_mw length != n_steps");
    require(omega_mw.minCoeff() >= 0.0, "Pulse: omega_mw samples must be >= 0");
  }
};

/// Controls of the effective time-dependent van der Waals model: samples of
/// 1/tau(t), from which V(t) = -1/(2 tau) and Delta(t) = delta_o - 1/(4 tau).
/// 1/tau may take any real value including zero.
struct EffectiveVdwControls {
  int n_steps = 0;
  double total_time = 0.0;
  VectorXd inv_tau; // N samples, units of omega_o
  double delta_o = 0.0;
  double theta = 0.0;

  double dt() const { return n_steps > 0 ? total_time / n_steps : 0.0; }

  void validate() const {
    require(n_steps >= 1, "EffectiveVdwControls: n_steps must be >= 1");
    require(inv_tau.size() == n_steps, "EffectiveVdwControls: inv_tau length != n_steps");
    require(inv_tau.allFinite(), "EffectiveVdwControls: inv_tau samples must be finite");
  }
};

/// Laser-phase controls of the single-Rydberg-state baseline model
/// (constant laser amplitude, phi_o(t) as the only control function).
struct BaselinePulse {
  int n_steps = 0;
  double total_time = 0.0;
  VectorXd phi_o; // laser phase samples (rad)
  double theta = 0.0;

  double dt() const { return n_steps > 0 ? total_time / n_steps : 0.0; }

  void validate() const {
    require(n_steps >= 1, "BaselinePulse: n_steps must be >= 1");
    require(phi_o.size() == n_steps, "BaselinePulse: phi_o length != n_steps");
  }
};

/// A dense Hamiltonian over an explicitly labelled basis. Hermitian unless
/// decay terms are attached.
struct HamiltonianBlock {
  std::vector<std::string> labels;
  MatrixXcd matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// GRAPE hyperparameters.
struct OptimizationPlan {
  int n_steps = 200;
  double epsilon = 1e-3;      // regularizer schedule factor
  double eta0 = 1e-6;         // initial regularizer weight
  double dT = 0.002;          // time-sweep increment, units of 1/omega_o
  int k_points = 15;          // robustness quadrature nodes (odd)
  double x_max = 0.033;       // maximum relative displacement
  double delta_t_star = 0.0;  // extra time budget for robustification
  double eta_robust = 1e-7;   // regularizer weight during robustification
  int max_iters = 600;        // per-optimization iteration cap
  double grad_tol = 1e-9;     // projected-gradient infinity norm
  double exact_threshold = 1e-6; // infidelity below which the gate is exact
  double t_ceiling = 9.0;     // time-sweep abort ceiling
  int restarts = 8;           // multi-start count for the first sweep point
  std::uint64_t seed = 20240u;
  int threads = 1;

  void validate() const {
    require(n_steps >= 2, "OptimizationPlan: n_steps must be >= 2");
    require(epsilon >= 0.0, "OptimizationPlan: epsilon must be >= 0");
    require(dT > 0.0, "OptimizationPlan: dT must be > 0");
    require(k_points >= 1 && k_points % 2 == 1, "OptimizationPlan: k_points must be odd");
    require(x_max >= 0.0, "OptimizationPlan: x_max must be >= 0");
    require(max_iters > 0, "OptimizationPlan: max_iters must be > 0");
    require(restarts >= 1, "OptimizationPlan: restarts must be >= 1");
    require(threads >= 1, "OptimizationPlan: threads must be >= 1");
  }
};

/// Motional and decay parameters in SI units. omega_o_si is the bridge to
/// the dimensionless gate units.
struct NoiseModel {
  double omega_o_si = 2 * kPi * 5e6; // optical Rabi frequency (rad/s)
  double omega_trap = 2 * kPi * 1e5; // trap angular frequency (rad/s)
  double temperature = 2e-6;         // K
  int fock_cutoff = 8;               // per-atom oscillator truncation
  double mass = kMassRb87;           // kg
  double lambda_o = 297e-9;          // optical transition wavelength (m)
  double lambda_mw = 6e-3;           // microwave transition wavelength (m)
  double distance = 2.51e-6;         // interatomic distance R (m)
  double gamma_1 = 0.0;              // Rydberg decay rates (1/s)
  double gamma_2 = 0.0;
  double gamma_e = 0.0;              // optional intermediate-state rate (1/s)
  double joint_weight_floor = 1e-4;  // thermal-product truncation threshold

  double x_osc() const { return std::sqrt(kHbar / (2.0 * mass * omega_trap)); }
  double p_osc() const { return std::sqrt(kHbar * mass * omega_trap / 2.0); }
  double eta_o() const { return 2 * kPi * x_osc() / lambda_o; }
  double eta_mw() const { return 2 * kPi * x_osc() / lambda_mw; }

  void validate() const {
    require(omega_o_si > 0.0, "NoiseModel: omega_o_si must be positive");
    require(omega_trap > 0.0, "NoiseModel: omega_trap must be positive");
    require(temperature >= 0.0, "NoiseModel: temperature must be >= 0");
    require(fock_cutoff >= 2, "NoiseModel: fock_cutoff must be >= 2");
    require(mass > 0.0 && distance > 0.0, "NoiseModel: mass and distance must be positive");
    require(gamma_1 >= 0.0 && gamma_2 >= 0.0 && gamma_e >= 0.0,
            "NoiseModel: decay rates must be >= 0");
  }
};

/// Value and gradient of one cost evaluation. The gradient is laid out as
/// the packed parameter vector of the owning control problem.
struct CostReport {
  double bell_infidelity = 0.0;
  double endpoint_penalty = 0.0;
  double smoothness_penalty = 0.0; // N * sum of squared sample differences (eta not applied)
  double total = 0.0;              // bell_infidelity + endpoint_penalty + eta * smoothness_penalty
  double fidelity = 0.0;
  VectorXd gradient;
};

}  // namespace forge
