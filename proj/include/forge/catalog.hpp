#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/types.hpp"

namespace forge::catalog {

enum class Species { Rb, Cs };
enum class StatePair { PS, DP }; // nP3/2-nS1/2 resp. (n-1)D5/2-nP3/2

std::string to_string(Species s);
std::string to_string(StatePair p);
Species species_from_string(const std::string& s);
StatePair state_pair_from_string(const std::string& s);

/// One row of the embedded interaction/lifetime tables: dipole-dipole and
/// van der Waals strengths at a working distance, joined with the matching
/// Rydberg lifetimes.
struct SpeciesRow {
  Species species = Species::Rb;
  int n = 0;                    // principal quantum number
  StatePair state_pair = StatePair::PS;
  double distance_um = 0.0;     // R
  double j_2pi_mhz = 0.0;       // J / 2pi
  double v11_over_j = 0.0;
  double v12_over_j = 0.0;
  double v22_over_j = 0.0;
  double gamma1_inv_us = 0.0;   // 1/Gamma_1
  double gamma2_inv_us = 0.0;   // 1/Gamma_2
};

const std::vector<SpeciesRow>& all_rows();

/// FNV-1a checksum of the canonical serialization of the embedded tables;
/// pinned in the test suite against silent edits.
std::uint64_t table_checksum();

/// Row lookup by (species, n, J target). Lists the available keys in the
/// error message when nothing matches.
SpeciesRow lookup(Species species, int n, double j_2pi_mhz,
                  StatePair pair = StatePair::PS);

/// Dimensionless gate model for a catalog row at a given optical Rabi
/// frequency: J/omega_o from the ratio of frequencies, V_ij from the table
/// ratios.
GateModel to_gate_model(const SpeciesRow& row, double omega_o_2pi_mhz);

/// Decay rates of the row in units of omega_o.
struct DecayRates {
  double gamma_1 = 0.0;
  double gamma_2 = 0.0;
};
DecayRates to_decay_rates(const SpeciesRow& row, double omega_o_2pi_mhz);

/// Atomic mass and default single-photon wavelength for a species.
double species_mass_kg(Species s);
double species_lambda_o_m(Species s);

// Unit bridges (bijective, round-trip exact to 1e-12 in the tests).
double mhz_to_dimensionless(double f_2pi_mhz, double omega_o_2pi_mhz);
double dimensionless_to_mhz(double x, double omega_o_2pi_mhz);
double lifetime_us_to_rate(double lifetime_us, double omega_o_2pi_mhz);
double rate_to_lifetime_us(double rate, double omega_o_2pi_mhz);

/// Writes the CSV mirror of the embedded tables (one row per entry).
std::string tables_csv();

}  // namespace forge::catalog
