#include <doctest.h>

#include <random>

#include "forge/grape.hpp"
#include "forge/propagator.hpp"

using namespace forge;
using grape::ModelKind;
using grape::Problem;

namespace {

GateModel test_model() {
  GateModel m;
  m.delta_o = 0.0;
  m.j_exchange = 10.0;
  m.v11 = 0.07;
  m.v12 = 0.16;
  m.v22 = 0.79;
  return m;
}

VectorXd random_params(const Problem& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd x(p.dim());
  for (int i = 0; i < x.size(); ++i) x(i) = u(rng);
  if (p.kind == ModelKind::FourLevel)
    x.segment(p.n_steps, p.n_steps) = x.segment(p.n_steps, p.n_steps).cwiseAbs();
  return x;
}

// Central finite differences of the total cost.
VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& x,
                     double h = 1e-6) {
  VectorXd g(x.size());
  VectorXd xp = x;
  for (int i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    double fp = f(xp);
    xp(i) = x(i) - h;
    double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

double max_rel_error(const VectorXd& analytic, const VectorXd& fd) {
  double scale = std::max(1.0, fd.lpNorm<Eigen::Infinity>());
  return (analytic - fd).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace

TEST_CASE("endpoint penalty matches its definition") {
  GateModel m = test_model();
  Pulse p;
  p.n_steps = 6;
  p.total_time = 1.0;
  p.phi_mw = VectorXd::Zero(6);
  p.omega_mw = VectorXd::Zero(6);
  p.omega_mw(0) = m.omega_o;
  p.theta = kPi;
  auto rep = grape::cost_exact(p, m);
  CHECK(rep.endpoint_penalty == doctest::Approx(1.0));
  CHECK(rep.total == doctest::Approx(rep.bell_infidelity + 1.0));
}

TEST_CASE("regularizer off reproduces the exact cost") {
  std::mt19937_64 rng(2);
  GateModel m = test_model();
  Problem prob{ModelKind::FourLevel, m, 0.0, m.omega_o, 20, 3.0};
  VectorXd x = random_params(prob, rng);
  Pulse p = grape::unpack_four_level(prob, x);
  auto r0 = grape::cost_exact(p, m);
  auto r1 = grape::cost_regularized(p, m, 0.0);
  CHECK(r0.total == doctest::Approx(r1.total).epsilon(1e-15));
  CHECK(r0.bell_infidelity == doctest::Approx(r1.bell_infidelity).epsilon(1e-15));
  CHECK((r0.gradient - r1.gradient).lpNorm<Eigen::Infinity>() <= 1e-15);
}

TEST_CASE("smoothness penalty of a sawtooth phase") {
  GateModel m = test_model();
  Pulse p;
  p.n_steps = 4;
  p.total_time = 1.0;
  p.phi_mw = VectorXd(4);
  p.phi_mw << 0.0, 1.0, 0.0, 1.0; // unit jumps
  p.omega_mw = VectorXd::Zero(4);
  const double eta = 0.01;
  auto rep = grape::cost_regularized(p, m, eta);
  // N * sum of squared differences = 4 * 3; the total includes eta times it.
  CHECK(rep.smoothness_penalty == doctest::Approx(12.0));
  CHECK(rep.total - rep.bell_infidelity - rep.endpoint_penalty ==
        doctest::Approx(eta * 4.0 * 3.0));
}

TEST_CASE("constant controls have zero smoothness penalty") {
  GateModel m = test_model();
  Pulse p;
  p.n_steps = 8;
  p.total_time = 2.0;
  p.phi_mw = VectorXd::Constant(8, 0.7);
  p.omega_mw = VectorXd::Constant(8, 0.4);
  auto rep = grape::cost_regularized(p, m, 0.5);
  CHECK(rep.smoothness_penalty == doctest::Approx(0.0));
}

TEST_CASE("analytic gradients match central finite differences") {
  // The always-on gradient exactness property: 100 random pulses across the
  // model kinds and grid sizes, relative error below 1e-6 against central
  // differences with h = 1e-6 (scaled by the gradient magnitude).
  std::mt19937_64 rng(42);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = (trial % 2 == 0) ? 20 : 50;
    ModelKind kind = trial % 3 == 0   ? ModelKind::EffectiveVdw
                     : trial % 3 == 1 ? ModelKind::FourLevel
                                      : ModelKind::BaselinePhase;
    Problem prob;
    prob.kind = kind;
    prob.model = test_model();
    if (trial % 6 == 1) prob.model.infinite_j = true;
    prob.v_over_omega = 2.0;
    prob.n_steps = n;
    prob.total_time = 4.0;
    double eta = (trial % 4 == 0) ? 1e-4 : 0.0;
    VectorXd x = random_params(prob, rng);
    CostReport rep = grape::evaluate(prob, x, eta);
    auto f = [&](const VectorXd& y) { return grape::evaluate(prob, y, eta).total; };
    VectorXd fd = fd_gradient(f, x);
    CHECK(max_rel_error(rep.gradient, fd) < 1e-6);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("robust cost gradient matches finite differences") {
  std::mt19937_64 rng(77);
  GateModel m = test_model();
  Problem prob{ModelKind::FourLevel, m, 0.0, m.omega_o, 16, 3.0};
  VectorXd x = random_params(prob, rng);
  CostReport rep = grape::evaluate_robust(prob, x, 0.033, 7, 1e-5);
  auto f = [&](const VectorXd& y) {
    return grape::evaluate_robust(prob, y, 0.033, 7, 1e-5).total;
  };
  VectorXd fd = fd_gradient(f, x);
  CHECK(max_rel_error(rep.gradient, fd) < 1e-6);
}

TEST_CASE("robust cost degenerates to the exact cost") {
  std::mt19937_64 rng(5);
  GateModel m = test_model();
  Problem prob{ModelKind::FourLevel, m, 0.0, m.omega_o, 12, 2.0};
  VectorXd x = random_params(prob, rng);
  auto exact = grape::evaluate(prob, x, 0.0);
  auto single = grape::evaluate_robust(prob, x, 0.0, 1, 0.0);
  CHECK(exact.total == doctest::Approx(single.total).epsilon(1e-15));
}

TEST_CASE("robust quadrature is stable under refinement") {
  std::mt19937_64 rng(6);
  GateModel m = test_model();
  Problem prob{ModelKind::FourLevel, m, 0.0, m.omega_o, 40, 5.0};
  VectorXd x = random_params(prob, rng);
  double c15 = grape::evaluate_robust(prob, x, 0.033, 15, 0.0).bell_infidelity;
  double c31 = grape::evaluate_robust(prob, x, 0.033, 31, 0.0).bell_infidelity;
  CHECK(std::abs(c15 - c31) < 1e-4);
}

TEST_CASE("quasi-Newton recovers a box-constrained quadratic minimizer") {
  // f = 1/2 sum a_i (x_i - c_i)^2 with box [-0.5, 0.5]; the solution with a
  // diagonal Hessian is the clamped unconstrained minimizer.
  const int n = 10;
  VectorXd a(n), c(n);
  for (int i = 0; i < n; ++i) {
    a(i) = 1.0 + i;
    c(i) = (i % 2 == 0 ? 1.0 : -1.0) * (0.2 + 0.15 * i);
  }
  auto objective = [&](const VectorXd& x, VectorXd& g) {
    g = a.cwiseProduct(x - c);
    return 0.5 * (a.cwiseProduct((x - c).cwiseAbs2())).sum();
  };
  opt::Bounds b;
  b.lower = VectorXd::Constant(n, -0.5);
  b.upper = VectorXd::Constant(n, 0.5);
  opt::Options oo;
  oo.grad_tol = 1e-12;
  auto res = opt::minimize(objective, VectorXd::Zero(n), b, oo);
  CHECK(res.converged);
  VectorXd expected = c.cwiseMax(-0.5).cwiseMin(0.5);
  CHECK((res.x - expected).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("minimize is a fixed point at an optimum") {
  // A pulse realizing an exact CZ(theta): evaluated cost is ~0 and the
  // optimizer returns immediately with the pulse unchanged.
  GateModel m;
  m.infinite_j = true;
  // Build a trivially exact "pulse": zero duration, identity gate, theta=0
  // would give F = 1/4. Instead check the fixed-point property on a generic
  // stationary start: optimizer must not move when the gradient is ~0.
  Pulse p;
  p.n_steps = 10;
  p.total_time = 0.0; // U = identity, all gradients vanish
  p.phi_mw = VectorXd::Zero(10);
  p.omega_mw = VectorXd::Zero(10);
  p.theta = 0.0;
  opt::Result info;
  auto cost = [&](const Pulse& q) { return grape::cost_exact(q, m); };
  Pulse out = grape::minimize(cost, p, &info);
  CHECK(info.iterations <= 1);
  CHECK((out.phi_mw - p.phi_mw).lpNorm<Eigen::Infinity>() == 0.0);
}
