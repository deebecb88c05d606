#include "forge/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace forge::opt {

namespace {

void project(const Bounds& b, VectorXd& x) {
  if (b.has_lower()) x = x.cwiseMax(b.lower);
  if (b.has_upper()) x = x.cwiseMin(b.upper);
}

// Gradient with components pointing out of the feasible box zeroed.
VectorXd projected_gradient(const Bounds& b, const VectorXd& x, const VectorXd& g) {
  VectorXd pg = g;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    if (b.has_lower() && x(i) <= b.lower(i) && g(i) > 0.0) pg(i) = 0.0;
    if (b.has_upper() && x(i) >= b.upper(i) && g(i) < 0.0) pg(i) = 0.0;
  }
  return pg;
}

struct Pair {
  VectorXd s, y;
  double rho;
};

// Standard two-loop recursion for the L-BFGS inverse Hessian action.
VectorXd two_loop(const std::deque<Pair>& mem, const VectorXd& g) {
  VectorXd q = g;
  const int m = static_cast<int>(mem.size());
  std::vector<double> alpha(m);
  for (int i = m - 1; i >= 0; --i) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  if (m > 0) {
    const Pair& last = mem.back();
    double gamma = last.s.dot(last.y) / last.y.squaredNorm();
    q *= gamma;
  }
  for (int i = 0; i < m; ++i) {
    double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return q;
}

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0; // directional derivative along the projected step
  VectorXd x;
  VectorXd g;
};

}  // namespace

Result minimize(const Objective& objective, VectorXd x0, const Bounds& bounds,
                const Options& options) {
  Result res;
  project(bounds, x0);
  VectorXd x = x0;
  VectorXd g(x.size());
  double f = objective(x, g);
  res.evaluations = 1;

  std::deque<Pair> memory;
  const double c1 = 1e-4, c2 = 0.9;

  for (int iter = 0; iter < options.max_iters; ++iter) {
    res.iterations = iter;
    VectorXd pg = projected_gradient(bounds, x, g);
    if (pg.lpNorm<Eigen::Infinity>() < options.grad_tol) {
      res.converged = true;
      res.message = "projected gradient below tolerance";
      break;
    }

    VectorXd d = -two_loop(memory, g);
    // Freeze variables pinned at a bound with the gradient pushing outward.
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
      bool at_lower = bounds.has_lower() && x(i) <= bounds.lower(i) && g(i) > 0.0;
      bool at_upper = bounds.has_upper() && x(i) >= bounds.upper(i) && g(i) < 0.0;
      if (at_lower || at_upper) d(i) = 0.0;
    }
    double g_dot_d = d.dot(g);
    if (g_dot_d > -1e-16 * d.norm() * g.norm()) {
      d = -pg;
      g_dot_d = d.dot(g);
      if (g_dot_d >= 0.0) {
        res.message = "no descent direction at the projected point";
        break;
      }
    }

    // Strong-Wolfe line search (bracket and zoom) along the projected path.
    // The path is linear until a bound activates; slopes are measured with
    // the realized step so bound activation is handled gracefully.
    auto probe = [&](double alpha) {
      LinePoint p;
      p.alpha = alpha;
      p.x = x + alpha * d;
      project(bounds, p.x);
      p.g.resize(x.size());
      p.f = objective(p.x, p.g);
      ++res.evaluations;
      VectorXd step = p.x - x;
      double denom = std::max(alpha, 1e-300);
      p.slope = p.g.dot(step) / denom;
      return p;
    };
    const double slope0 = g_dot_d;
    double alpha = memory.empty()
                       ? std::min(1.0, 1.0 / std::max(1.0, pg.lpNorm<Eigen::Infinity>()))
                       : 1.0;
    LinePoint lo, hi, accepted;
    bool have_accepted = false, have_bracket = false;
    LinePoint prev;
    prev.alpha = 0.0;
    prev.f = f;
    prev.slope = slope0;
    for (int ls = 0; ls < 20 && !have_accepted && !have_bracket; ++ls) {
      LinePoint p = probe(alpha);
      if ((p.x - x).lpNorm<Eigen::Infinity>() == 0.0) break;
      if (p.f > f + c1 * alpha * slope0 || (ls > 0 && p.f >= prev.f)) {
        lo = prev;
        hi = p;
        have_bracket = true;
        break;
      }
      if (std::abs(p.slope) <= -c2 * slope0) {
        accepted = p;
        have_accepted = true;
        break;
      }
      if (p.slope >= 0.0) {
        lo = p;
        hi = prev;
        have_bracket = true;
        break;
      }
      prev = p;
      alpha *= 2.0;
    }
    if (have_bracket) {
      for (int z = 0; z < 25 && !have_accepted; ++z) {
        double a = 0.5 * (lo.alpha + hi.alpha);
        LinePoint p = probe(a);
        if (p.f > f + c1 * a * slope0 || p.f >= lo.f) {
          hi = p;
        } else {
          if (std::abs(p.slope) <= -c2 * slope0) {
            accepted = p;
            have_accepted = true;
            break;
          }
          if (p.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
          lo = p;
        }
        if (std::abs(hi.alpha - lo.alpha) < 1e-14 * std::max(1.0, lo.alpha)) {
          if (lo.alpha > 0.0 && lo.f < f) {
            accepted = lo;
            have_accepted = true;
          }
          break;
        }
      }
      if (!have_accepted && lo.alpha > 0.0 && lo.f < f) {
        accepted = lo;
        have_accepted = true;
      }
    }
    if (!have_accepted) {
      res.message = "line search failed to find an acceptable step";
      break;
    }

    VectorXd s = accepted.x - x;
    VectorXd y = accepted.g - g;
    double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }
    double step_size = s.lpNorm<Eigen::Infinity>();
    x = accepted.x;
    f = accepted.f;
    g = accepted.g;
    if (step_size < options.step_tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
      res.message = "step size below tolerance";
      break;
    }
    if (iter == options.max_iters - 1) res.message = "maximum iterations reached";
  }
  if (res.message.empty()) res.message = "maximum iterations reached";

  res.x = x;
  res.f = f;
  res.grad = g;
  return res;
}

}  // namespace forge::opt
