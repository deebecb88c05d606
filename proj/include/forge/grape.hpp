#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forge/optimize.hpp"
#include "forge/types.hpp"

namespace forge::grape {

enum class ModelKind { FourLevel, EffectiveVdw, BaselinePhase };

/// One GRAPE control problem: the model family, the control grid, and the
/// packed-parameter layout. Parameters are packed as
///   [f_1(0..N-1), ..., f_k(0..N-1), delta_o (if present), theta]
/// with k = 2 control functions (phi_mw, omega_mw) for the four-level model
/// and k = 1 (1/tau resp. phi_o) for the effective and baseline models.
struct Problem {
  ModelKind kind = ModelKind::FourLevel;
  GateModel model;             // four-level parameters
  double v_over_omega = 0.0;   // baseline blockade strength
  double omega_o = 1.0;
  int n_steps = 0;
  double total_time = 0.0;

  int n_controls() const { return kind == ModelKind::FourLevel ? 2 : 1; }
  bool has_delta_o() const { return kind != ModelKind::BaselinePhase; }
  bool has_endpoint_penalty() const { return kind == ModelKind::FourLevel; }
  int dim() const { return n_controls() * n_steps + (has_delta_o() ? 1 : 0) + 1; }
  int delta_o_index() const { return n_controls() * n_steps; }
  int theta_index() const { return dim() - 1; }
};

VectorXd pack(const Problem& problem, const Pulse& pulse);
Pulse unpack_four_level(const Problem& problem, const VectorXd& params);
VectorXd pack(const Problem& problem, const EffectiveVdwControls& controls);
EffectiveVdwControls unpack_effective(const Problem& problem, const VectorXd& params);
VectorXd pack(const Problem& problem, const BaselinePulse& pulse);
BaselinePulse unpack_baseline(const Problem& problem, const VectorXd& params);

/// Lower bounds: omega_mw samples >= 0 for the four-level model, everything
/// else unbounded.
opt::Bounds default_bounds(const Problem& problem);

/// Cost and exact gradient at the packed parameter vector. eta weights the
/// smoothness regularizer; robustness (when x_max > 0 and k_points > 1)
/// averages the Bell fidelity over k displacement nodes in [-x_max, x_max]
/// with J scaled by (1 - 3x) and V_ij by (1 - 6x).
CostReport evaluate(const Problem& problem, const VectorXd& params, double eta);
CostReport evaluate_robust(const Problem& problem, const VectorXd& params,
                           double x_max, int k_points, double eta, int threads = 1);

// Spec-facing wrappers over the four-level problem.
CostReport cost_exact(const Pulse& pulse, const GateModel& model);
CostReport cost_regularized(const Pulse& pulse, const GateModel& model, double eta);
CostReport cost_robust(const Pulse& pulse, const GateModel& model, double x_max,
                       int k_points, double eta = 0.0, int threads = 1);

/// Minimizes a cost handle over a four-level pulse under the default box
/// constraints. Non-convergence is reported in `info`, never thrown.
using CostFunction = std::function<CostReport(const Pulse&)>;
Pulse minimize(const CostFunction& cost, const Pulse& start, opt::Result* info = nullptr,
               const opt::Options& options = {});

/// The documented initial guess for the first time-sweep point; restart 0 is
/// the unperturbed guess, higher restarts add seeded smooth perturbations.
VectorXd initial_params(const Problem& problem, std::uint64_t seed, int restart);

struct SweepPoint {
  double total_time = 0.0;
  double bell_infidelity = 0.0;
  double eta = 0.0;
  int iterations = 0;
};

struct SweepResult {
  bool converged = false;
  double t_star = 0.0;
  VectorXd params;          // optimum at t_star (or at the last attempted T)
  Problem problem;          // with total_time = t_star
  std::vector<SweepPoint> trace;
  std::string message;
};

/// Repeats the optimization for increasing T (step plan.dT), warm-starting
/// from the previous optimum and resetting eta = epsilon * previous Bell
/// infidelity, until the infidelity drops below plan.exact_threshold. The
/// first point is multi-started from plan.restarts seeded initial guesses.
SweepResult time_sweep(const Problem& start_problem, const OptimizationPlan& plan,
                       const std::optional<VectorXd>& initial = std::nullopt);

struct RobustifyResult {
  Pulse pulse;
  double exact_pulse_robust_cost = 0.0; // robust cost of the input pulse
  double robust_cost = 0.0;             // robust cost after optimization
  bool improved = false;
  opt::Result info;
};

/// Re-optimizes a time-optimal exact pulse under the robust cost at total
/// time T* + plan.delta_t_star with regularizer weight plan.eta_robust.
RobustifyResult robustify(const Pulse& exact_pulse, const GateModel& model,
                          const OptimizationPlan& plan);

/// Mean Bell infidelity of a pulse over a uniform displacement grid
/// x in [-x_max, x_max] (diagnostic used for robustness comparisons).
std::vector<double> infidelity_vs_displacement(const Pulse& pulse, const GateModel& model,
                                               const VectorXd& x_grid);

}  // namespace forge::grape
