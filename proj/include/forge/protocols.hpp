#pragma once

#include <string>
#include <vector>

#include "forge/grape.hpp"
#include "forge/types.hpp"

namespace forge::protocols {

enum class PiecewiseBranch { sqrt3_minus, sqrt3_plus, near_j };

std::string to_string(PiecewiseBranch b);

/// The three-step protocol: optical pi-pulse, detuned microwave pulse,
/// optical pi-pulse. The sqrt3 branches fix delta_mw = -/+ omega_mw/sqrt(3)
/// and microwave area sqrt(3) pi; the near_j branch parks the microwave
/// detuning on the exchange resonance delta_mw ~ J.
struct PiecewiseSpec {
  PiecewiseBranch branch = PiecewiseBranch::sqrt3_minus;
  double omega_mw_ratio = 10.0; // Omega_mw / Omega_o
  bool laser_always_on = false; // approximate variant without laser gating
  double j_over_omega = 1e7;    // J / Omega_o used when simulating near_j
};

/// One piecewise-constant leg of a protocol, in the detuning frame.
struct Segment {
  double duration = 0.0; // units of 1/omega_o
  double omega_o = 0.0;
  double omega_mw = 0.0;
  double delta_mw = 0.0;
};

struct PiecewiseGate {
  std::vector<Segment> segments;
  double theta = 0.0;          // predicted CZ angle
  double predicted_time = 0.0; // predicted omega_o * T
};

PiecewiseGate piecewise_gate(const PiecewiseSpec& spec);

struct SequenceResult {
  double infidelity = 0.0;
  double total_time = 0.0;
  double t_rydberg = 0.0;
  cplx a01, a11;
};

/// Exact (per-segment eigendecomposition) simulation of a segment sequence
/// under the detuning-frame sector blocks; infinite_j models are projected.
SequenceResult simulate_sequence(const std::vector<Segment>& segments, double theta,
                                 const GateModel& model, int substeps_per_segment = 1);

struct FiniteJResult {
  bool feasible = false;
  VectorXd delta_mw;     // optimized modulation of the middle segment
  double t_mid = 0.0;    // optimized middle-segment duration (1/omega_o)
  double theta = 0.0;
  double infidelity = 0.0;
  std::string message;
};

/// GRAPE refinement of the middle-segment detuning modulation so the
/// three-segment sequence stays exact at finite J. Feasible solutions are
/// expected down to J/omega_mw of about 2.
FiniteJResult piecewise_finite_j(const PiecewiseSpec& spec, double j_over_omega_mw,
                                 int n_steps = 100);

struct AlwaysOnResult {
  double total_time = 0.0; // optimized total laser time
  double fidelity = 0.0;
  double theta = 0.0;
};

/// Approximate variant where the laser stays on during the microwave pulse;
/// only the total pulse time and theta are re-tuned.
AlwaysOnResult piecewise_always_on(const PiecewiseSpec& spec, double j_over_omega,
                                   const VectorXd& delta_mw_mod = VectorXd(),
                                   double t_mid = -1.0);

struct BaselineBranch {
  double t_star = 0.0;
  BaselinePulse pulse;
  double t_rydberg = 0.0;
  double infidelity = 0.0;
};

struct BaselineResult {
  bool feasible = false;
  std::vector<BaselineBranch> branches; // distinct solutions, fastest first
  std::string message;
};

/// Time-optimal gate search for the single-Rydberg-state model at finite
/// blockade strength, laser amplitude fixed and phase as the control.
/// Multi-start sweeps archive every distinct branch found.
BaselineResult vdw_baseline_optimize(double v_over_omega, const OptimizationPlan& plan,
                                     double t_start = 6.2);

/// Two-photon excitation parameters in units of the effective Rabi
/// frequency omega_eff = omega_1 omega_2 / (2 delta_e).
struct TwoPhotonModel {
  double omega_1 = 0.0;
  double omega_2 = 0.0;
  double delta_e = 0.0;  // intermediate-state detuning, sign free
  double gamma_e = 0.0;  // intermediate-state decay rate
  double gamma_1 = 0.0;  // Rydberg decay rates
  double gamma_2 = 0.0;
  bool compensate_stark = true; // microwave tracks the light-shifted r1

  double omega_eff() const { return omega_1 * omega_2 / (2.0 * std::abs(delta_e)); }

  void validate() const {
    require(omega_1 > 0.0 && omega_2 > 0.0, "TwoPhotonModel: Rabi frequencies must be positive");
    double ratio = std::abs(delta_e) / std::max(omega_1, omega_2);
    require(ratio >= 10.0,
            "TwoPhotonModel: |delta_e| must be at least 10x the single-photon Rabi frequencies");
  }
  bool adiabaticity_marginal() const {
    return std::abs(delta_e) < 20.0 * std::max(omega_1, omega_2);
  }
};

/// TwoPhotonModel from laboratory numbers, normalized to omega_eff.
TwoPhotonModel two_photon_from_lab(double omega1_2pi_mhz, double omega2_2pi_mhz,
                                   double delta_e_2pi_mhz, double tau_e_us,
                                   double gamma1_inv_us, double gamma2_inv_us,
                                   bool negative_delta_e);

struct TwoPhotonResult {
  double theta = 0.0;
  double total_time = 0.0;
  double infidelity = 0.0;      // with the model's decay rates applied
  double ideal_infidelity = 0.0; // decay switched off
};

/// Re-simulates a base pulse (optimized under adiabatic elimination) with
/// the intermediate state explicit, maximizing fidelity over (theta, T).
TwoPhotonResult two_photon_protocol(const TwoPhotonModel& model, const Pulse& base_pulse,
                                    const GateModel& base_model);

/// Amplitudes of the evolved |01>/|11> states of the explicit five-level
/// model when the base pulse is replayed at total time T.
std::pair<cplx, cplx> two_photon_amplitudes(const TwoPhotonModel& model,
                                            const Pulse& base_pulse,
                                            const GateModel& base_model, double total_time,
                                            bool with_decay);

}  // namespace forge::protocols
