#pragma once

#include <functional>
#include <string>

#include "forge/common.hpp"

namespace forge::opt {

/// Box constraints; empty vectors mean unbounded on that side.
struct Bounds {
  VectorXd lower;
  VectorXd upper;

  bool has_lower() const { return lower.size() > 0; }
  bool has_upper() const { return upper.size() > 0; }
};

struct Options {
  int max_iters = 500;
  double grad_tol = 1e-9;  // infinity norm of the projected gradient
  int history = 10;        // limited-memory pair count
  double step_tol = 1e-15; // relative step size below which we stop
};

struct Result {
  VectorXd x;
  double f = 0.0;
  VectorXd grad;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

/// Objective callback: returns f(x) and fills grad (same size as x).
using Objective = std::function<double(const VectorXd&, VectorXd&)>;

/// Limited-memory quasi-Newton minimization with projected box constraints
/// and a backtracking line search along the projected path. Deterministic
/// for identical inputs. Non-convergence is reported in the result, never
/// thrown.
Result minimize(const Objective& objective, VectorXd x0, const Bounds& bounds,
                const Options& options);

}  // namespace forge::opt
