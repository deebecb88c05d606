#include <doctest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "forge/catalog.hpp"
#include "forge/serialize.hpp"

using namespace forge;
namespace cat = forge::catalog;

TEST_CASE("table lookups return the embedded rows") {
  auto rb = cat::lookup(cat::Species::Rb, 40, 50.0);
  CHECK(rb.distance_um == doctest::Approx(2.51));
  CHECK(rb.v11_over_j == doctest::Approx(0.007));
  CHECK(rb.v12_over_j == doctest::Approx(0.016));
  CHECK(rb.v22_over_j == doctest::Approx(0.079));

  auto cs = cat::lookup(cat::Species::Cs, 70, 70.0);
  CHECK(cs.v11_over_j == doctest::Approx(-0.086));
  CHECK(cs.v22_over_j == doctest::Approx(0.720));

  auto dp = cat::lookup(cat::Species::Rb, 40, 50.0, cat::StatePair::DP);
  CHECK(dp.distance_um == doctest::Approx(3.07));
  CHECK(dp.v22_over_j == doctest::Approx(-0.009));
  CHECK(dp.gamma1_inv_us == doctest::Approx(55.0));
  CHECK(dp.gamma2_inv_us == doctest::Approx(118.0));
}

TEST_CASE("failed lookups list the available keys") {
  try {
    cat::lookup(cat::Species::Rb, 45, 50.0);
    CHECK(false);
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("n=45") != std::string::npos);
    CHECK(msg.find("available rows") != std::string::npos);
    CHECK(msg.find("Rb n=40") != std::string::npos);
  }
}

TEST_CASE("every interaction row joins to a lifetime entry") {
  for (const auto& row : cat::all_rows()) {
    CHECK(row.gamma1_inv_us > 0.0);
    CHECK(row.gamma2_inv_us > 0.0);
  }
}

TEST_CASE("sign conventions of the van der Waals ratios") {
  for (const auto& row : cat::all_rows()) {
    if (row.state_pair != cat::StatePair::PS) continue;
    if (row.species == cat::Species::Cs) CHECK(row.v11_over_j < 0.0);
    if (row.species == cat::Species::Rb) CHECK(row.v11_over_j > 0.0);
  }
}

TEST_CASE("table checksum is pinned") {
  CHECK(cat::table_checksum() == 0xa4863633b5c29819ull);
}

TEST_CASE("unit conversions round-trip") {
  for (double omega : {1.0, 4.98, 5.0, 8.75}) {
    for (double f : {50.0, 70.0, 0.35}) {
      double x = cat::mhz_to_dimensionless(f, omega);
      CHECK(cat::dimensionless_to_mhz(x, omega) == doctest::Approx(f).epsilon(1e-12));
    }
    for (double tau : {69.0, 118.0, 913.0}) {
      double rate = cat::lifetime_us_to_rate(tau, omega);
      CHECK(cat::rate_to_lifetime_us(rate, omega) == doctest::Approx(tau).epsilon(1e-12));
    }
  }
}

TEST_CASE("gate model construction from a row") {
  auto row = cat::lookup(cat::Species::Rb, 40, 50.0);
  GateModel m = cat::to_gate_model(row, 5.0);
  CHECK(m.j_exchange == doctest::Approx(10.0));
  CHECK(m.v11 == doctest::Approx(0.07));
  CHECK(m.v12 == doctest::Approx(0.16));
  CHECK(m.v22 == doctest::Approx(0.79));
  auto rates = cat::to_decay_rates(row, 5.0);
  // 1/(118 us * 2pi*5 MHz) = 2.697e-4
  CHECK(rates.gamma_1 == doctest::Approx(2.697e-4).epsilon(1e-3));
}

TEST_CASE("pulse serialization round-trips bitwise") {
  Pulse p;
  p.n_steps = 7;
  p.total_time = 6.299999999999997;
  p.phi_mw = VectorXd::LinSpaced(7, -0.123456789012345, 2.9999999999999);
  p.omega_mw = VectorXd::LinSpaced(7, 0.0, 1.7777777777777);
  p.delta_o = 0.6543210987654321;
  p.theta = -2.7182818284590452;
  auto tmp = std::filesystem::temp_directory_path() / "forge_pulse_roundtrip.json";
  io::write_pulse(tmp, p);
  Pulse q = io::read_pulse(tmp);
  CHECK(q.n_steps == p.n_steps);
  CHECK(q.total_time == p.total_time); // bitwise
  for (int i = 0; i < 7; ++i) {
    CHECK(q.phi_mw(i) == p.phi_mw(i));
    CHECK(q.omega_mw(i) == p.omega_mw(i));
  }
  CHECK(q.delta_o == p.delta_o);
  CHECK(q.theta == p.theta);
  std::filesystem::remove(tmp);
}

TEST_CASE("malformed pulse files raise structured errors naming the field") {
  auto j = io::to_json(Pulse{3, 1.0, VectorXd::Zero(3), VectorXd::Zero(3), 0.0, 0.0});
  SUBCASE("wrong sample length") {
    j["omega_mw_omega_o"] = {0.0, 0.0};
    try {
      io::pulse_from_json(j);
      CHECK(false);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("omega_mw_omega_o") != std::string::npos);
    }
  }
  SUBCASE("missing field") {
    j.erase("theta_rad");
    try {
      io::pulse_from_json(j);
      CHECK(false);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("theta_rad") != std::string::npos);
    }
  }
  SUBCASE("unsupported format version") {
    j["format_version"] = 99;
    try {
      io::pulse_from_json(j);
      CHECK(false);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("format_version") != std::string::npos);
    }
  }
}

TEST_CASE("effective and baseline pulse codecs round-trip") {
  EffectiveVdwControls c;
  c.n_steps = 4;
  c.total_time = 6.03;
  c.inv_tau = VectorXd::LinSpaced(4, -1.5, 5.1);
  c.delta_o = 0.0669;
  c.theta = 4.9;
  auto c2 = io::effective_from_json(io::to_json(c));
  CHECK(c2.inv_tau(2) == c.inv_tau(2));

  BaselinePulse b;
  b.n_steps = 3;
  b.total_time = 7.61;
  b.phi_o = VectorXd::LinSpaced(3, 0.0, 1.0);
  b.theta = -4.1;
  auto b2 = io::baseline_from_json(io::to_json(b));
  CHECK(b2.phi_o(1) == b.phi_o(1));
  CHECK(b2.theta == b.theta);
}
