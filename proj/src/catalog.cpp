#include "forge/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace forge::catalog {

namespace {

// Interaction strengths and lifetimes for nP3/2-nS1/2 pairs (PS) and
// (n-1)D5/2-nP3/2 pairs (DP) at the tabulated working distances.
const std::vector<SpeciesRow> kRows = {
    // species, n, pair, R(um), J/2pi(MHz), V11/J, V12/J, V22/J, G1^-1(us), G2^-1(us)
    {Species::Rb, 40, StatePair::PS, 2.51, 50.0, 0.007, 0.016, 0.079, 118.0, 69.0},
    {Species::Rb, 40, StatePair::PS, 2.25, 70.0, 0.010, 0.022, 0.110, 118.0, 69.0},
    {Species::Rb, 50, StatePair::PS, 3.45, 50.0, 0.015, 0.037, 0.182, 239.0, 141.0},
    {Species::Rb, 50, StatePair::PS, 3.08, 70.0, 0.020, 0.052, 0.255, 239.0, 141.0},
    {Species::Rb, 60, StatePair::PS, 4.45, 50.0, 0.027, 0.076, 0.354, 423.0, 252.0},
    {Species::Rb, 60, StatePair::PS, 3.98, 70.0, 0.037, 0.107, 0.496, 423.0, 252.0},
    {Species::Cs, 40, StatePair::PS, 2.43, 50.0, -0.011, 0.007, 0.064, 151.0, 60.0},
    {Species::Cs, 40, StatePair::PS, 2.17, 70.0, -0.015, 0.010, 0.089, 151.0, 60.0},
    {Species::Cs, 50, StatePair::PS, 3.36, 50.0, -0.021, 0.020, 0.150, 313.0, 126.0},
    {Species::Cs, 50, StatePair::PS, 3.00, 70.0, -0.030, 0.028, 0.210, 313.0, 126.0},
    {Species::Cs, 60, StatePair::PS, 4.35, 50.0, -0.038, 0.045, 0.295, 560.0, 227.0},
    {Species::Cs, 60, StatePair::PS, 3.89, 70.0, -0.053, 0.062, 0.413, 560.0, 227.0},
    {Species::Cs, 70, StatePair::PS, 5.41, 50.0, -0.062, 0.087, 0.514, 913.0, 372.0},
    {Species::Cs, 70, StatePair::PS, 4.84, 70.0, -0.086, 0.121, 0.720, 913.0, 372.0},
    {Species::Rb, 40, StatePair::DP, 3.07, 50.0, 0.002, 0.002, -0.009, 55.0, 118.0},
    {Species::Rb, 50, StatePair::DP, 4.20, 50.0, 0.004, 0.005, -0.108, 111.0, 239.0},
    {Species::Rb, 60, StatePair::DP, 5.42, 50.0, 0.008, 0.010, -0.142, 196.0, 423.0},
    {Species::Rb, 70, StatePair::DP, 6.70, 50.0, 0.014, 0.018, -0.207, 317.0, 684.0},
};

std::string row_key(const SpeciesRow& r) {
  std::ostringstream os;
  os << to_string(r.species) << " n=" << r.n << " J/2pi=" << r.j_2pi_mhz << " MHz "
     << to_string(r.state_pair);
  return os.str();
}

}  // namespace

std::string to_string(Species s) { return s == Species::Rb ? "Rb" : "Cs"; }

std::string to_string(StatePair p) { return p == StatePair::PS ? "P-S" : "D-P"; }

Species species_from_string(const std::string& s) {
  if (s == "Rb" || s == "rb") return Species::Rb;
  if (s == "Cs" || s == "cs") return Species::Cs;
  throw ValidationError("unknown species '" + s + "' (expected Rb or Cs)");
}

StatePair state_pair_from_string(const std::string& s) {
  if (s == "P-S" || s == "PS" || s == "ps") return StatePair::PS;
  if (s == "D-P" || s == "DP" || s == "dp") return StatePair::DP;
  throw ValidationError("unknown state pair '" + s + "' (expected P-S or D-P)");
}

const std::vector<SpeciesRow>& all_rows() { return kRows; }

std::string tables_csv() {
  std::ostringstream os;
  os << "species,n,state_pair,distance_um,j_2pi_mhz,v11_over_j,v12_over_j,"
        "v22_over_j,gamma1_inv_us,gamma2_inv_us\n";
  for (const auto& r : kRows) {
    os << to_string(r.species) << ',' << r.n << ',' << to_string(r.state_pair) << ','
       << r.distance_um << ',' << r.j_2pi_mhz << ',' << r.v11_over_j << ','
       << r.v12_over_j << ',' << r.v22_over_j << ',' << r.gamma1_inv_us << ','
       << r.gamma2_inv_us << '\n';
  }
  return os.str();
}

std::uint64_t table_checksum() {
  const std::string canon = tables_csv();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SpeciesRow lookup(Species species, int n, double j_2pi_mhz, StatePair pair) {
  for (const auto& r : kRows) {
    if (r.species == species && r.n == n && r.state_pair == pair &&
        std::abs(r.j_2pi_mhz - j_2pi_mhz) < 1e-9)
      return r;
  }
  std::ostringstream os;
  os << "no table row for " << to_string(species) << " n=" << n
     << " J/2pi=" << j_2pi_mhz << " MHz " << to_string(pair) << "; available rows:";
  for (const auto& r : kRows) os << "\n  " << row_key(r);
  throw ValidationError(os.str());
}

GateModel to_gate_model(const SpeciesRow& row, double omega_o_2pi_mhz) {
  require(omega_o_2pi_mhz > 0.0, "to_gate_model: omega_o must be positive");
  GateModel m;
  m.omega_o = 1.0;
  m.j_exchange = row.j_2pi_mhz / omega_o_2pi_mhz;
  m.v11 = row.v11_over_j * m.j_exchange;
  m.v12 = row.v12_over_j * m.j_exchange;
  m.v22 = row.v22_over_j * m.j_exchange;
  return m;
}

DecayRates to_decay_rates(const SpeciesRow& row, double omega_o_2pi_mhz) {
  return {lifetime_us_to_rate(row.gamma1_inv_us, omega_o_2pi_mhz),
          lifetime_us_to_rate(row.gamma2_inv_us, omega_o_2pi_mhz)};
}

double species_mass_kg(Species s) { return s == Species::Rb ? kMassRb87 : kMassCs133; }

double species_lambda_o_m(Species s) { return s == Species::Rb ? 297e-9 : 319e-9; }

double mhz_to_dimensionless(double f_2pi_mhz, double omega_o_2pi_mhz) {
  return f_2pi_mhz / omega_o_2pi_mhz;
}

double dimensionless_to_mhz(double x, double omega_o_2pi_mhz) {
  return x * omega_o_2pi_mhz;
}

double lifetime_us_to_rate(double lifetime_us, double omega_o_2pi_mhz) {
  // omega_o in rad/s is 2pi * 1e6 * omega_o_2pi_mhz; a lifetime tau in us
  // maps to Gamma/omega_o = 1 / (tau_us * 1e-6 * omega_o_rad_s).
  const double omega_rad_s = 2.0 * kPi * 1e6 * omega_o_2pi_mhz;
  return 1.0 / (lifetime_us * 1e-6 * omega_rad_s);
}

double rate_to_lifetime_us(double rate, double omega_o_2pi_mhz) {
  const double omega_rad_s = 2.0 * kPi * 1e6 * omega_o_2pi_mhz;
  return 1.0 / (rate * omega_rad_s) * 1e6;
}

}  // namespace forge::catalog
