#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "forge/protocols.hpp"
#include "forge/types.hpp"

namespace forge::noise {

using SparseXcd = Eigen::SparseMatrix<cplx>;

/// Boltzmann occupation probabilities over the truncated Fock ladder,
/// renormalized to sum to one.
VectorXd thermal_weights(const NoiseModel& noise);

/// Untruncated thermal mean occupation 1/(exp(beta hbar omega) - 1).
double mean_occupation(const NoiseModel& noise);

/// Truncated position operator exponential exp(i eta (a + a^dag)), the
/// recoil displacement attached to a driven transition.
MatrixXcd displacement_operator(double eta, int cutoff);

/// Full step generator over the 16 M^2 product space (two four-level atoms
/// times two Fock ladders): free motion, recoil-dressed drives,
/// distance-modulated interactions and non-Hermitian decay.
SparseXcd build_noisy_generator(const GateModel& model, const NoiseModel& noise,
                                double omega_mw, double phi_mw);

struct SimulateOptions {
  int threads = 1;
  bool verify_cutoff = false; // re-run at cutoff-2 and compare
  bool project_initial_motion = false; // project onto the initial motional state
                                       // instead of tracing motion out
};

struct NoisyResult {
  double infidelity = 0.0;
  double fidelity = 0.0;
  int n_configs = 0;            // thermal product states retained
  double discarded_weight = 0.0;
  double boundary_population = 0.0; // worst final top-Fock occupation
  double norm_growth = 0.0;         // max per-step norm increase (should be <= 0 with decay)
  double cutoff_sensitivity = -1.0; // filled when verify_cutoff is set
  bool converged = true;
};

/// Thermally averaged Bell infidelity of a pulse executed with quantized
/// motion, photon recoil, distance-fluctuating interactions and Rydberg
/// decay. Motional degrees of freedom are traced out of the final state;
/// norm lost to decay counts as infidelity.
NoisyResult simulate_noisy_gate(const Pulse& pulse, const GateModel& model,
                                const NoiseModel& noise,
                                const SimulateOptions& options = {});

/// Same simulation with the two-photon excitation explicit (five levels per
/// atom, two laser recoils, intermediate-state decay).
struct TwoPhotonLasers {
  double lambda_1 = 420e-9;  // m
  double lambda_2 = 1013e-9; // m
  bool counter_propagating = true;
};

NoisyResult simulate_noisy_gate_two_photon(const Pulse& pulse, const GateModel& model,
                                           const protocols::TwoPhotonModel& tp,
                                           const NoiseModel& noise,
                                           const TwoPhotonLasers& lasers = {},
                                           const SimulateOptions& options = {});

struct SweepRow {
  std::string pulse_label;
  double axis_value = 0.0; // unit depends on the axis
  double infidelity = 0.0;
  bool ok = false;
  std::string error;
};

/// Evaluates simulate_noisy_gate over a grid of trap frequencies (Hz).
/// Per-point failures are recorded and do not abort the sweep.
std::vector<SweepRow> sweep_trap_frequency(
    const std::vector<std::pair<std::string, Pulse>>& pulses, const GateModel& model,
    const NoiseModel& base, const std::vector<double>& trap_frequencies_hz,
    const SimulateOptions& options = {});

/// Evaluates over a grid of optical Rabi frequencies (2pi MHz). The gate
/// model is rescaled per point from the given J and V ratios.
std::vector<SweepRow> sweep_rabi_frequency(
    const std::vector<std::pair<std::string, Pulse>>& pulses, double j_2pi_mhz,
    double v11_over_j, double v12_over_j, double v22_over_j, double gamma1_inv_us,
    double gamma2_inv_us, const NoiseModel& base,
    const std::vector<double>& omega_o_2pi_mhz, const SimulateOptions& options = {});

}  // namespace forge::noise
