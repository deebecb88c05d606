#include "forge/grape.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "forge/parallel.hpp"
#include "forge/propagator.hpp"
#include "forge/statespace.hpp"
#include "forge/stepgrad.hpp"

namespace forge::grape {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

int sector_dim(const Problem& p, int sector) {
  switch (p.kind) {
    case ModelKind::FourLevel:
      return sector == 0 ? 3 : (p.model.infinite_j ? 4 : 6);
    case ModelKind::EffectiveVdw:
    case ModelKind::BaselinePhase:
      return sector == 0 ? 2 : 3;
  }
  return 0;
}

// Step Hamiltonian of one sector plus its derivatives w.r.t. the local
// control samples (k of them) and delta_o.
void build_step(const Problem& p, const VectorXd& params, int step, int sector,
                MatrixXcd& h, std::vector<MatrixXcd>& dh_local, MatrixXcd& dh_delta) {
  const int n = p.n_steps;
  switch (p.kind) {
    case ModelKind::FourLevel: {
      const double phi = params(step);
      const double omega = params(n + step);
      const double delta_o = params(p.delta_o_index());
      dh_local.resize(2);
      if (sector == 0) {
        statespace::lab_block_01(p.model, delta_o, omega, phi, h);
        statespace::lab_block_01_derivs(p.model, omega, phi, dh_local[0], dh_local[1], dh_delta);
      } else {
        statespace::lab_block_11(p.model, delta_o, omega, phi, h);
        statespace::lab_block_11_derivs(p.model, omega, phi, dh_local[0], dh_local[1], dh_delta);
      }
      break;
    }
    case ModelKind::EffectiveVdw: {
      const double u = params(step);
      const double delta_o = params(p.delta_o_index());
      const double shifted = -delta_o + 0.25 * u;
      dh_local.resize(1);
      if (sector == 0) {
        h = MatrixXcd::Zero(2, 2);
        h(0, 1) = h(1, 0) = 0.5 * p.omega_o;
        h(1, 1) = shifted;
        dh_local[0] = MatrixXcd::Zero(2, 2);
        dh_local[0](1, 1) = 0.25;
        dh_delta = MatrixXcd::Zero(2, 2);
        dh_delta(1, 1) = -1.0;
      } else {
        const double c = p.omega_o / std::sqrt(2.0);
        h = MatrixXcd::Zero(3, 3);
        h(0, 1) = h(1, 0) = c;
        h(1, 2) = h(2, 1) = c;
        h(1, 1) = shifted;
        h(2, 2) = -2.0 * delta_o;
        dh_local[0] = MatrixXcd::Zero(3, 3);
        dh_local[0](1, 1) = 0.25;
        dh_delta = MatrixXcd::Zero(3, 3);
        dh_delta(1, 1) = -1.0;
        dh_delta(2, 2) = -2.0;
      }
      break;
    }
    case ModelKind::BaselinePhase: {
      const double phi = params(step);
      const cplx c = 0.5 * p.omega_o * std::exp(kImag * phi);
      dh_local.resize(1);
      if (sector == 0) {
        h = MatrixXcd::Zero(2, 2);
        h(0, 1) = c;
        h(1, 0) = std::conj(c);
        dh_local[0] = MatrixXcd::Zero(2, 2);
        dh_local[0](0, 1) = kImag * c;
        dh_local[0](1, 0) = std::conj(dh_local[0](0, 1));
      } else {
        const cplx cs = std::sqrt(2.0) * c;
        h = MatrixXcd::Zero(3, 3);
        h(0, 1) = cs;
        h(1, 0) = std::conj(cs);
        h(1, 2) = cs;
        h(2, 1) = std::conj(cs);
        h(2, 2) = p.v_over_omega * p.omega_o;
        dh_local[0] = MatrixXcd::Zero(3, 3);
        dh_local[0](0, 1) = kImag * cs;
        dh_local[0](1, 0) = std::conj(dh_local[0](0, 1));
        dh_local[0](1, 2) = kImag * cs;
        dh_local[0](2, 1) = std::conj(dh_local[0](1, 2));
      }
      dh_delta = MatrixXcd();
      break;
    }
  }
}

struct SectorAmp {
  cplx a = 0.0;
  VectorXcd d_local; // k*N entries, layout matching the packed controls
  cplx d_delta = 0.0;
};

// Forward/backward sweep producing <e0|U_N..U_1|e0> and its exact gradient
// for one sector (adjoint method for piecewise-constant controls).
SectorAmp sector_amplitude(const Problem& p, const VectorXd& params, int sector,
                           bool with_gradient) {
  const int n = p.n_steps;
  const int k = p.n_controls();
  const double dt = p.total_time / n;
  const int dim = sector_dim(p, sector);

  SectorAmp out;
  out.d_local = VectorXcd::Zero(k * n);

  VectorXcd psi = VectorXcd::Zero(dim);
  psi(0) = 1.0;
  if (p.total_time == 0.0) {
    out.a = 1.0;
    return out;
  }

  std::vector<stepgrad::EigStep> steps(n);
  std::vector<VectorXcd> psis(n + 1);
  psis[0] = psi;
  MatrixXcd h;
  std::vector<MatrixXcd> dh_local;
  MatrixXcd dh_delta;
  for (int i = 0; i < n; ++i) {
    build_step(p, params, i, sector, h, dh_local, dh_delta);
    steps[i] = stepgrad::decompose(h, dt);
    psis[i + 1] = stepgrad::apply(steps[i], psis[i]);
  }
  out.a = psis[n](0);
  if (!with_gradient) return out;

  VectorXcd chi = VectorXcd::Zero(dim);
  chi(0) = 1.0;
  for (int i = n - 1; i >= 0; --i) {
    build_step(p, params, i, sector, h, dh_local, dh_delta);
    const auto& es = steps[i];
    MatrixXcd phi = stepgrad::phi_matrix(es);
    VectorXcd chi_t = es.vecs.adjoint() * chi;
    VectorXcd psi_t = es.vecs.adjoint() * psis[i];
    for (int c = 0; c < k; ++c) {
      MatrixXcd e_t = es.vecs.adjoint() * dh_local[c] * es.vecs;
      out.d_local(c * n + i) =
          chi_t.dot(((-kImag * dt) * e_t).cwiseProduct(phi) * psi_t);
    }
    if (p.has_delta_o()) {
      MatrixXcd e_t = es.vecs.adjoint() * dh_delta * es.vecs;
      out.d_delta += chi_t.dot(((-kImag * dt) * e_t).cwiseProduct(phi) * psi_t);
    }
    chi = stepgrad::apply_adjoint(es, chi);
  }
  return out;
}

// Bell-infidelity part of the cost (no penalties) with gradient.
void fidelity_cost(const Problem& p, const VectorXd& params, CostReport& rep,
                   bool with_gradient) {
  const double theta = params(p.theta_index());
  SectorAmp s01 = sector_amplitude(p, params, 0, with_gradient);
  SectorAmp s11 = sector_amplitude(p, params, 1, with_gradient);
  const cplx e1 = std::exp(-kImag * theta);
  const cplx e2 = std::exp(-2.0 * kImag * theta);
  const cplx z = (1.0 + 2.0 * e1 * s01.a - e2 * s11.a) / 4.0;
  rep.fidelity = std::norm(z);
  rep.bell_infidelity = 1.0 - rep.fidelity;
  if (!with_gradient) return;
  rep.gradient = VectorXd::Zero(p.dim());
  const cplx zc = std::conj(z);
  const int kn = p.n_controls() * p.n_steps;
  for (int i = 0; i < kn; ++i) {
    cplx dz = (2.0 * e1 * s01.d_local(i) - e2 * s11.d_local(i)) / 4.0;
    rep.gradient(i) = -2.0 * std::real(zc * dz);
  }
  if (p.has_delta_o()) {
    cplx dz = (2.0 * e1 * s01.d_delta - e2 * s11.d_delta) / 4.0;
    rep.gradient(p.delta_o_index()) = -2.0 * std::real(zc * dz);
  }
  cplx dz_theta = (-2.0 * kImag * e1 * s01.a + 2.0 * kImag * e2 * s11.a) / 4.0;
  rep.gradient(p.theta_index()) = -2.0 * std::real(zc * dz_theta);
}

void add_penalties(const Problem& p, const VectorXd& params, double eta,
                   CostReport& rep, bool with_gradient) {
  const int n = p.n_steps;
  rep.endpoint_penalty = 0.0;
  rep.smoothness_penalty = 0.0;
  if (p.has_endpoint_penalty()) {
    const double w0 = params(n) / p.model.omega_o;
    const double w1 = params(n + n - 1) / p.model.omega_o;
    rep.endpoint_penalty = w0 * w0 + w1 * w1;
    if (with_gradient) {
      rep.gradient(n) += 2.0 * w0 / p.model.omega_o;
      rep.gradient(n + n - 1) += 2.0 * w1 / p.model.omega_o;
    }
  }
  for (int c = 0; c < p.n_controls(); ++c) {
    const int base = c * n;
    for (int i = 0; i + 1 < n; ++i) {
      const double d = params(base + i + 1) - params(base + i);
      rep.smoothness_penalty += static_cast<double>(n) * d * d;
      if (with_gradient && eta != 0.0) {
        rep.gradient(base + i + 1) += eta * 2.0 * n * d;
        rep.gradient(base + i) -= eta * 2.0 * n * d;
      }
    }
  }
  rep.total = rep.bell_infidelity + rep.endpoint_penalty + eta * rep.smoothness_penalty;
}

Problem displaced(const Problem& p, double x) {
  Problem q = p;
  q.model.j_exchange = p.model.j_exchange * (1.0 - 3.0 * x);
  q.model.v11 = p.model.v11 * (1.0 - 6.0 * x);
  q.model.v12 = p.model.v12 * (1.0 - 6.0 * x);
  q.model.v22 = p.model.v22 * (1.0 - 6.0 * x);
  return q;
}

}  // namespace

VectorXd pack(const Problem& p, const Pulse& pulse) {
  require(p.kind == ModelKind::FourLevel, "pack: pulse kind mismatch");
  require(pulse.n_steps == p.n_steps, "pack: n_steps mismatch");
  VectorXd x(p.dim());
  x.segment(0, p.n_steps) = pulse.phi_mw;
  x.segment(p.n_steps, p.n_steps) = pulse.omega_mw;
  x(p.delta_o_index()) = pulse.delta_o;
  x(p.theta_index()) = pulse.theta;
  return x;
}

Pulse unpack_four_level(const Problem& p, const VectorXd& params) {
  require(p.kind == ModelKind::FourLevel, "unpack_four_level: kind mismatch");
  Pulse pulse;
  pulse.n_steps = p.n_steps;
  pulse.total_time = p.total_time;
  pulse.phi_mw = params.segment(0, p.n_steps);
  pulse.omega_mw = params.segment(p.n_steps, p.n_steps).cwiseMax(0.0);
  pulse.delta_o = params(p.delta_o_index());
  pulse.theta = params(p.theta_index());
  return pulse;
}

VectorXd pack(const Problem& p, const EffectiveVdwControls& controls) {
  require(p.kind == ModelKind::EffectiveVdw, "pack: controls kind mismatch");
  require(controls.n_steps == p.n_steps, "pack: n_steps mismatch");
  VectorXd x(p.dim());
  x.segment(0, p.n_steps) = controls.inv_tau;
  x(p.delta_o_index()) = controls.delta_o;
  x(p.theta_index()) = controls.theta;
  return x;
}

EffectiveVdwControls unpack_effective(const Problem& p, const VectorXd& params) {
  require(p.kind == ModelKind::EffectiveVdw, "unpack_effective: kind mismatch");
  EffectiveVdwControls c;
  c.n_steps = p.n_steps;
  c.total_time = p.total_time;
  c.inv_tau = params.segment(0, p.n_steps);
  c.delta_o = params(p.delta_o_index());
  c.theta = params(p.theta_index());
  return c;
}

VectorXd pack(const Problem& p, const BaselinePulse& pulse) {
  require(p.kind == ModelKind::BaselinePhase, "pack: pulse kind mismatch");
  require(pulse.n_steps == p.n_steps, "pack: n_steps mismatch");
  VectorXd x(p.dim());
  x.segment(0, p.n_steps) = pulse.phi_o;
  x(p.theta_index()) = pulse.theta;
  return x;
}

BaselinePulse unpack_baseline(const Problem& p, const VectorXd& params) {
  require(p.kind == ModelKind::BaselinePhase, "unpack_baseline: kind mismatch");
  BaselinePulse pulse;
  pulse.n_steps = p.n_steps;
  pulse.total_time = p.total_time;
  pulse.phi_o = params.segment(0, p.n_steps);
  pulse.theta = params(p.theta_index());
  return pulse;
}

opt::Bounds default_bounds(const Problem& p) {
  opt::Bounds b;
  if (p.kind == ModelKind::FourLevel) {
    const double inf = std::numeric_limits<double>::infinity();
    b.lower = VectorXd::Constant(p.dim(), -inf);
    b.lower.segment(p.n_steps, p.n_steps).setZero();
  }
  return b;
}

CostReport evaluate(const Problem& p, const VectorXd& params, double eta) {
  require(params.size() == p.dim(), "evaluate: parameter size mismatch");
  CostReport rep;
  fidelity_cost(p, params, rep, true);
  add_penalties(p, params, eta, rep, true);
  return rep;
}

CostReport evaluate_robust(const Problem& p, const VectorXd& params, double x_max,
                           int k_points, double eta, int threads) {
  require(p.kind == ModelKind::FourLevel,
          "evaluate_robust: displacement scaling applies to the four-level model");
  require(x_max >= 0.0 && k_points >= 1, "evaluate_robust: invalid quadrature");
  if (k_points == 1 || x_max == 0.0) {
    CostReport rep;
    fidelity_cost(p, params, rep, true);
    add_penalties(p, params, eta, rep, true);
    return rep;
  }
  std::vector<CostReport> nodes(k_points);
  parallel_for(k_points, threads, [&](int j) {
    const double x = -x_max + 2.0 * x_max * j / (k_points - 1);
    fidelity_cost(displaced(p, x), params, nodes[j], true);
  });
  CostReport rep;
  rep.bell_infidelity = 0.0;
  rep.fidelity = 0.0;
  rep.gradient = VectorXd::Zero(p.dim());
  for (const auto& node : nodes) {
    rep.bell_infidelity += node.bell_infidelity / k_points;
    rep.fidelity += node.fidelity / k_points;
    rep.gradient += node.gradient / k_points;
  }
  add_penalties(p, params, eta, rep, true);
  return rep;
}

CostReport cost_exact(const Pulse& pulse, const GateModel& model) {
  pulse.validate();
  Problem p{ModelKind::FourLevel, model, 0.0, model.omega_o, pulse.n_steps, pulse.total_time};
  return evaluate(p, pack(p, pulse), 0.0);
}

CostReport cost_regularized(const Pulse& pulse, const GateModel& model, double eta) {
  pulse.validate();
  require(eta >= 0.0, "cost_regularized: eta must be >= 0");
  Problem p{ModelKind::FourLevel, model, 0.0, model.omega_o, pulse.n_steps, pulse.total_time};
  return evaluate(p, pack(p, pulse), eta);
}

CostReport cost_robust(const Pulse& pulse, const GateModel& model, double x_max,
                       int k_points, double eta, int threads) {
  pulse.validate();
  Problem p{ModelKind::FourLevel, model, 0.0, model.omega_o, pulse.n_steps, pulse.total_time};
  return evaluate_robust(p, pack(p, pulse), x_max, k_points, eta, threads);
}

Pulse minimize(const CostFunction& cost, const Pulse& start, opt::Result* info,
               const opt::Options& options) {
  start.validate();
  Problem p;
  p.kind = ModelKind::FourLevel;
  p.n_steps = start.n_steps;
  p.total_time = start.total_time;
  auto objective = [&](const VectorXd& x, VectorXd& grad) {
    CostReport rep = cost(unpack_four_level(p, x));
    grad = rep.gradient;
    return rep.total;
  };
  opt::Result res = opt::minimize(objective, pack(p, start), default_bounds(p), options);
  if (info) *info = res;
  return unpack_four_level(p, res.x);
}

VectorXd initial_params(const Problem& p, std::uint64_t seed, int restart) {
  VectorXd x = VectorXd::Zero(p.dim());
  const int n = p.n_steps;
  if (p.kind == ModelKind::FourLevel) {
    for (int i = 0; i < n; ++i)
      x(n + i) = p.model.omega_o * std::sin(kPi * (i + 0.5) / n);
  }
  x(p.theta_index()) = kPi;
  if (restart == 0) return x;

  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto perturb_samples = [&](int base, double amplitude) {
    // Low-order Fourier perturbation keeps the start smooth under the
    // regularizer.
    double c[3] = {unit(rng), unit(rng), unit(rng)};
    for (int i = 0; i < n; ++i) {
      double s = (i + 0.5) / n;
      double v = 0.0;
      for (int h = 0; h < 3; ++h) v += c[h] * std::sin(kPi * (h + 1) * s);
      x(base + i) += amplitude * v;
    }
  };
  switch (p.kind) {
    case ModelKind::FourLevel: {
      // Restart classes: smooth perturbations of the half-sine arch, and an
      // exchange-resonance guess where the microwave phase winds near
      // -1.3 J with the amplitude peaking around J. The second family is
      // where the time-optimal pulses live at moderate J.
      const double j = p.model.infinite_j ? 0.0 : p.model.j_exchange;
      const bool resonant_class = j > 2.0 * p.model.omega_o && restart % 3 == 2;
      if (resonant_class) {
        const double sign = (restart % 2 == 0) ? -1.0 : 1.0;
        const double slope = sign * 1.3 * j * (1.0 + 0.1 * unit(rng));
        const double amp = j * (1.0 + 0.2 * unit(rng));
        const double width = 0.18 * (1.0 + 0.2 * unit(rng));
        for (int i = 0; i < n; ++i) {
          double s = (i + 0.5) / n;
          x(i) = slope * s * p.total_time;
          double arch = std::sin(kPi * s);
          double envelope = 0.12 + 0.88 * std::exp(-0.5 * (s - 0.5) * (s - 0.5) /
                                                   (width * width));
          x(n + i) = std::max(0.0, amp * arch * envelope);
        }
        x(p.delta_o_index()) = sign * 0.1 + 0.08 * unit(rng);
        x(p.theta_index()) = sign * 1.3 + 0.25 * unit(rng);
        return x;
      }
      perturb_samples(0, 0.8);
      perturb_samples(n, (restart % 3 == 0 ? 0.5 * std::max(1.0, 0.5 * j) : 0.3) *
                             p.model.omega_o);
      break;
    }
    case ModelKind::EffectiveVdw:
      perturb_samples(0, 1.5 * p.omega_o);
      break;
    case ModelKind::BaselinePhase:
      perturb_samples(0, 0.8);
      break;
  }
  if (p.has_delta_o()) x(p.delta_o_index()) += 0.3 * unit(rng);
  x(p.theta_index()) += 0.6 * unit(rng);
  return x;
}

namespace {

// Branch fingerprint used to keep distinct solution families alive during
// the time sweep: mean phase winding rate, theta and delta_o separate the
// known families cleanly.
struct Fingerprint {
  double winding = 0.0;
  double theta = 0.0;
  double delta_o = 0.0;
};

Fingerprint fingerprint(const Problem& p, const VectorXd& x) {
  Fingerprint f;
  const int n = p.n_steps;
  f.winding = (x(n - 1) - x(0)) / std::max(p.total_time, 1e-9);
  f.theta = std::remainder(x(p.theta_index()), kTwoPi);
  f.delta_o = p.has_delta_o() ? x(p.delta_o_index()) : 0.0;
  return f;
}

bool same_branch(const Fingerprint& a, const Fingerprint& b) {
  return std::abs(a.winding - b.winding) < 0.5 &&
         std::abs(std::remainder(a.theta - b.theta, kTwoPi)) < 0.4 &&
         std::abs(a.delta_o - b.delta_o) < 0.1;
}

}  // namespace

SweepResult time_sweep(const Problem& start_problem, const OptimizationPlan& plan,
                       const std::optional<VectorXd>& initial) {
  plan.validate();
  require(start_problem.n_steps == plan.n_steps,
          "time_sweep: problem and plan disagree on n_steps");
  SweepResult out;
  Problem prob = start_problem;
  opt::Options oo;
  oo.max_iters = plan.max_iters;
  oo.grad_tol = plan.grad_tol;
  const opt::Bounds bounds = default_bounds(prob);

  auto optimize_from = [&](const VectorXd& x0, double eta, int* iters) {
    auto objective = [&](const VectorXd& x, VectorXd& grad) {
      CostReport rep = evaluate(prob, x, eta);
      grad = rep.gradient;
      return rep.total;
    };
    opt::Result res = opt::minimize(objective, x0, bounds, oo);
    if (iters) *iters = res.iterations;
    return res;
  };

  // First sweep point: multi-start unless an explicit start is provided.
  // Distinct solution families are carried through the sweep as separate
  // candidates; the sweep ends at the first time where any candidate
  // reaches the exactness threshold, which is what "time-optimal" means
  // when several branches coexist.
  struct Candidate {
    VectorXd params;
    double infid = 1.0;
  };
  std::vector<Candidate> candidates;
  int first_iters = 0;
  if (initial.has_value()) {
    auto res = optimize_from(*initial, plan.eta0, &first_iters);
    candidates.push_back({res.x, evaluate(prob, res.x, 0.0).bell_infidelity});
  } else {
    std::vector<opt::Result> results(plan.restarts);
    parallel_for(plan.restarts, plan.threads, [&](int r) {
      results[r] = optimize_from(initial_params(prob, plan.seed, r), plan.eta0, nullptr);
    });
    std::vector<int> order(plan.restarts);
    for (int r = 0; r < plan.restarts; ++r) order[r] = r;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return results[a].f < results[b].f; });
    const int max_candidates = 3;
    for (int r : order) {
      if (static_cast<int>(candidates.size()) >= max_candidates) break;
      if (results[r].f > 0.4) continue; // dead starts
      Fingerprint fp = fingerprint(prob, results[r].x);
      bool duplicate = false;
      for (const auto& c : candidates)
        if (same_branch(fingerprint(prob, c.params), fp)) duplicate = true;
      if (duplicate) continue;
      candidates.push_back(
          {results[r].x, evaluate(prob, results[r].x, 0.0).bell_infidelity});
    }
    if (candidates.empty())
      candidates.push_back(
          {results[order[0]].x, evaluate(prob, results[order[0]].x, 0.0).bell_infidelity});
    first_iters = results[order[0]].iterations;
  }

  int iters = first_iters;
  while (true) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(candidates.size()); ++c)
      if (candidates[c].infid < candidates[best].infid) best = c;
    out.trace.push_back({prob.total_time, candidates[best].infid, 0.0, iters});
    if (candidates[best].infid < plan.exact_threshold) {
      out.converged = true;
      out.t_star = prob.total_time;
      out.params = candidates[best].params;
      out.problem = prob;
      out.message = "exact gate reached";
      return out;
    }
    if (prob.total_time + plan.dT > plan.t_ceiling) {
      out.t_star = prob.total_time;
      out.params = candidates[best].params;
      out.problem = prob;
      out.message = "time ceiling reached without convergence";
      return out;
    }
    out.trace.back().eta = plan.epsilon * candidates[best].infid;
    prob.total_time += plan.dT;
    std::vector<Candidate> advanced = candidates;
    parallel_for(static_cast<int>(candidates.size()), plan.threads, [&](int c) {
      const double eta = plan.epsilon * candidates[c].infid;
      auto res = optimize_from(candidates[c].params, eta, nullptr);
      advanced[c].params = res.x;
      advanced[c].infid = evaluate(prob, res.x, 0.0).bell_infidelity;
    });
    candidates = std::move(advanced);
    iters = 0;
  }
}

RobustifyResult robustify(const Pulse& exact_pulse, const GateModel& model,
                          const OptimizationPlan& plan) {
  exact_pulse.validate();
  plan.validate();
  RobustifyResult out;
  Problem p{ModelKind::FourLevel, model, 0.0, model.omega_o, exact_pulse.n_steps,
            exact_pulse.total_time + plan.delta_t_star};

  Problem p_orig = p;
  p_orig.total_time = exact_pulse.total_time;
  out.exact_pulse_robust_cost =
      evaluate_robust(p_orig, pack(p_orig, exact_pulse), plan.x_max, plan.k_points, 0.0,
                      plan.threads)
          .bell_infidelity;

  auto objective = [&](const VectorXd& x, VectorXd& grad) {
    CostReport rep =
        evaluate_robust(p, x, plan.x_max, plan.k_points, plan.eta_robust, plan.threads);
    grad = rep.gradient;
    return rep.total;
  };
  opt::Options oo;
  oo.max_iters = plan.max_iters;
  oo.grad_tol = plan.grad_tol;
  out.info = opt::minimize(objective, pack(p, exact_pulse), default_bounds(p), oo);
  out.pulse = unpack_four_level(p, out.info.x);
  out.robust_cost =
      evaluate_robust(p, out.info.x, plan.x_max, plan.k_points, 0.0, plan.threads)
          .bell_infidelity;
  out.improved = out.robust_cost < out.exact_pulse_robust_cost;
  return out;
}

std::vector<double> infidelity_vs_displacement(const Pulse& pulse, const GateModel& model,
                                               const VectorXd& x_grid) {
  std::vector<double> infidelities(x_grid.size());
  Problem p{ModelKind::FourLevel, model, 0.0, model.omega_o, pulse.n_steps, pulse.total_time};
  const VectorXd params = pack(p, pulse);
  for (int j = 0; j < x_grid.size(); ++j) {
    CostReport rep;
    fidelity_cost(displaced(p, x_grid(j)), params, rep, false);
    infidelities[j] = rep.bell_infidelity;
  }
  return infidelities;
}

}  // namespace forge::grape
