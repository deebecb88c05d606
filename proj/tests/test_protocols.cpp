#include <doctest.h>

#include "forge/propagator.hpp"
#include "forge/protocols.hpp"
#include "forge/statespace.hpp"

using namespace forge;
namespace pr = forge::protocols;

TEST_CASE("piecewise sequence realizes CZ exactly in the blockade limit") {
  // 20 microwave amplitudes; total time matches the closed form to 1e-12
  // and the simulated infidelity stays below 1e-10.
  for (int k = 0; k < 20; ++k) {
    double ratio = 5.0 + 5.0 * k;
    for (auto branch : {pr::PiecewiseBranch::sqrt3_minus, pr::PiecewiseBranch::sqrt3_plus}) {
      pr::PiecewiseSpec spec;
      spec.branch = branch;
      spec.omega_mw_ratio = ratio;
      auto gate = pr::piecewise_gate(spec);
      double expected_time = 2.0 * kPi + std::sqrt(3.0) * kPi / ratio;
      CHECK(gate.predicted_time == doctest::Approx(expected_time).epsilon(1e-12));
      GateModel model;
      model.infinite_j = true;
      auto sim = pr::simulate_sequence(gate.segments, gate.theta, model);
      CHECK(sim.total_time == doctest::Approx(expected_time).epsilon(1e-12));
      CHECK(sim.infidelity < 1e-10);
    }
  }
}

TEST_CASE("piecewise timing at ratio 10 matches the quoted values") {
  pr::PiecewiseSpec spec;
  spec.omega_mw_ratio = 10.0;
  auto gate = pr::piecewise_gate(spec);
  CHECK(gate.predicted_time == doctest::Approx(6.8274).epsilon(1e-4));
  spec.branch = pr::PiecewiseBranch::near_j;
  auto near_j = pr::piecewise_gate(spec);
  CHECK(near_j.predicted_time == doctest::Approx(6.7275).epsilon(1e-4));
  CHECK(near_j.predicted_time == doctest::Approx(2.0 * kPi + std::sqrt(2.0) * kPi / 10.0)
                                     .epsilon(1e-12));
}

TEST_CASE("piecewise Rydberg time matches the closed form") {
  pr::PiecewiseSpec spec;
  spec.omega_mw_ratio = 20.0;
  auto gate = pr::piecewise_gate(spec);
  GateModel model;
  model.infinite_j = true;
  auto sim = pr::simulate_sequence(gate.segments, gate.theta, model, 400);
  CHECK(sim.t_rydberg ==
        doctest::Approx(kPi + std::sqrt(3.0) * kPi / 20.0).epsilon(1e-4));
}

TEST_CASE("near_j branch becomes exact in the double limit") {
  pr::PiecewiseSpec spec;
  spec.branch = pr::PiecewiseBranch::near_j;
  spec.omega_mw_ratio = 10.0;
  spec.j_over_omega = 1e7;
  auto gate = pr::piecewise_gate(spec);
  GateModel model;
  model.j_exchange = spec.j_over_omega;
  auto sim = pr::simulate_sequence(gate.segments, gate.theta, model);
  CHECK(sim.infidelity < 1e-9);
}

TEST_CASE("instantaneous microwave limit approaches 2 pi") {
  pr::PiecewiseSpec spec;
  spec.omega_mw_ratio = 1e6;
  auto gate = pr::piecewise_gate(spec);
  CHECK(gate.predicted_time == doctest::Approx(2.0 * kPi).epsilon(1e-5));
}

TEST_CASE("finite-J refinement keeps the sequence exact") {
  pr::PiecewiseSpec spec;
  spec.omega_mw_ratio = 10.0;
  for (auto branch : {pr::PiecewiseBranch::sqrt3_minus, pr::PiecewiseBranch::near_j}) {
    spec.branch = branch;
    auto res = pr::piecewise_finite_j(spec, 8.0, 60);
    CHECK(res.feasible);
    CHECK(res.infidelity < 1e-6);
    // The modulation oscillates around the analytic asymptote.
    double asym = branch == pr::PiecewiseBranch::near_j
                      ? 8.0 * spec.omega_mw_ratio
                      : -spec.omega_mw_ratio / std::sqrt(3.0);
    double mean = res.delta_mw.mean();
    CHECK(std::abs(mean - asym) < 0.35 * spec.omega_mw_ratio);
  }
}

TEST_CASE("baseline Hamiltonian splits into blocks consistent with full evolution") {
  // Re-derive the 01/11 baseline blocks from a two-atom construction and
  // compare amplitudes: a 3-level ladder with sqrt(2) couplings and V on
  // the doubly excited state.
  const double v = 3.0;
  BaselinePulse pulse;
  pulse.n_steps = 50;
  pulse.total_time = 4.0;
  pulse.phi_o = VectorXd::LinSpaced(50, 0.0, 2.0);
  pulse.theta = 0.7;
  auto traj = prop::evolve_baseline(pulse, v);

  // Full two-atom model: basis {0,1,r} per atom, 9 states.
  auto idx = [](int a, int b) { return 3 * a + b; };
  VectorXcd psi01 = VectorXcd::Zero(9), psi11 = VectorXcd::Zero(9);
  psi01(idx(0, 1)) = 1.0;
  psi11(idx(1, 1)) = 1.0;
  const double dt = pulse.dt();
  for (int i = 0; i < pulse.n_steps; ++i) {
    MatrixXcd h = MatrixXcd::Zero(9, 9);
    cplx c = 0.5 * std::exp(kImag * pulse.phi_o(i));
    for (int spectator = 0; spectator < 3; ++spectator) {
      h(idx(1, spectator), idx(2, spectator)) += c;
      h(idx(2, spectator), idx(1, spectator)) += std::conj(c);
      h(idx(spectator, 1), idx(spectator, 2)) += c;
      h(idx(spectator, 2), idx(spectator, 1)) += std::conj(c);
    }
    h(idx(2, 2), idx(2, 2)) += v;
    MatrixXcd u = prop::step_propagator(h, dt);
    psi01 = u * psi01;
    psi11 = u * psi11;
  }
  CHECK(std::abs(psi01(idx(0, 1)) - traj.a01()) < 1e-10);
  CHECK(std::abs(psi11(idx(1, 1)) - traj.a11()) < 1e-10);
}

TEST_CASE("two-photon model validation enforces adiabaticity") {
  pr::TwoPhotonModel tp;
  tp.omega_1 = 50.0;
  tp.omega_2 = 50.0;
  tp.delta_e = 300.0; // only 6x
  CHECK_THROWS_AS(tp.validate(), std::invalid_argument);
  tp.delta_e = 700.0; // 14x: valid but marginal
  CHECK_NOTHROW(tp.validate());
  CHECK(tp.adiabaticity_marginal());
  tp.delta_e = 1500.0;
  CHECK(!tp.adiabaticity_marginal());
}

TEST_CASE("two-photon lab-frame constructor reproduces the quoted effective Rabi") {
  auto tp = pr::two_photon_from_lab(278.0, 278.0, 7750.0, 0.11, 55.0, 118.0, true);
  // omega_eff = omega1 omega2 / (2 delta_e) ~ 2pi x 5 MHz, so in units of
  // omega_eff the single-photon Rabi frequencies are ~ 55.7.
  CHECK(tp.omega_1 == doctest::Approx(278.0 / 4.98).epsilon(0.01));
  CHECK(std::abs(tp.delta_e) / tp.omega_1 == doctest::Approx(27.8754).epsilon(1e-3));
  CHECK(tp.delta_e < 0.0);
  CHECK(tp.gamma_e > 0.0);
}

TEST_CASE("explicit intermediate state matches adiabatic elimination when far detuned") {
  // At delta_e/omega_1 = 1e3 the five-level evolution reproduces the
  // four-level model to 1e-5 in fidelity.
  GateModel m;
  m.j_exchange = 10.0;
  m.v11 = 0.02;
  m.v12 = 0.02;
  m.v22 = -0.09;
  m.delta_o = 0.4;
  Pulse p;
  p.n_steps = 80;
  p.total_time = 5.0;
  p.phi_mw = VectorXd::LinSpaced(80, 0.0, -2.0);
  p.omega_mw = VectorXd::Constant(80, 1.5);
  for (int i = 0; i < 80; ++i) p.omega_mw(i) *= std::sin(kPi * (i + 0.5) / 80.0);
  p.delta_o = m.delta_o;
  p.theta = 1.0;
  auto traj = prop::evolve(p, m);
  double f4 = prop::bell_fidelity(traj, p.theta);

  pr::TwoPhotonModel tp;
  tp.omega_1 = 2000.0;
  tp.omega_2 = 2000.0;
  tp.delta_e = -2.0e6; // omega_eff = o1 o2 / (2 de) = 1
  auto [a01, a11] = pr::two_photon_amplitudes(tp, p, m, p.total_time, false);
  // The residual light shift of |1> adds a common single-qubit phase x to
  // a01 and 2x to a11; compare gauge-invariant quantities.
  CHECK(std::abs(std::abs(a01) - std::abs(traj.a01())) < 1e-5);
  CHECK(std::abs(std::abs(a11) - std::abs(traj.a11())) < 1e-5);
  double inv5 = std::arg(a11 * std::conj(a01 * a01));
  double inv4 = std::arg(traj.a11() * std::conj(traj.a01() * traj.a01()));
  CHECK(std::abs(std::remainder(inv5 - inv4, 2.0 * kPi)) < 1e-5);
  // And after re-tuning (theta, T), the five-level gate fidelity must come
  // out at least as high as the fixed-theta four-level value.
  auto refined = pr::two_photon_protocol(tp, p, m);
  CHECK(1.0 - refined.ideal_infidelity >= f4 - 1e-6);
}
