#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forge/config.hpp"
#include "forge/serialize.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
  fs::create_directories(dir);
  fs::path out = dir / "stdout.txt";
  std::string cmd = std::string(FORGE_CLI_PATH) + " " + args + " > " + out.string() + " 2>" +
                    (dir / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  res.stdout_text = ss.str();
  return res;
}

fs::path sandbox(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "forge_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("config parser handles sections, comments and overrides") {
  auto cfg = cfg::Config::parse_string(
      "# comment\n[model]\nkind = four_level\nj_over_omega = 10\n\n"
      "[plan]\nn_steps = 200 \n; another comment\n");
  CHECK(cfg.get_str("model", "kind", "") == "four_level");
  CHECK(cfg.get_num("model", "j_over_omega", 0.0) == 10.0);
  CHECK(cfg.get_int("plan", "n_steps", 0) == 200);
  cfg.apply_override("plan.n_steps=100");
  CHECK(cfg.get_int("plan", "n_steps", 0) == 100);
  CHECK_THROWS_AS(cfg.apply_override("no_dots"), ValidationError);
  CHECK_THROWS_AS((void)cfg.get_num("model", "kind", 0.0), ValidationError);
}

TEST_CASE("tables command prints a looked-up row") {
  auto dir = sandbox("tables");
  auto res = run_cli("tables --set tables.species=Cs --set tables.n=60 "
                     "--set tables.j_2pi_mhz=50 --out " + dir.string(), dir);
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("R = 4.35") != std::string::npos);
  CHECK(res.stdout_text.find("V11/J = -0.038") != std::string::npos);
  CHECK(fs::exists(dir / "tables.csv"));
  CHECK(fs::exists(dir / "run.json"));
}

TEST_CASE("tables csv golden header") {
  auto dir = sandbox("tables_golden");
  auto res = run_cli("tables --out " + dir.string(), dir);
  CHECK(res.exit_code == 0);
  std::ifstream in(dir / "tables.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "species,n,state_pair,distance_um,j_2pi_mhz,v11_over_j,v12_over_j,"
        "v22_over_j,gamma1_inv_us,gamma2_inv_us");
}

TEST_CASE("malformed config fails validation with exit code 2 and no outputs") {
  auto dir = sandbox("invalid");
  write_file(dir / "bad.ini",
             "[model]\nspecies = Rb\nn = 40\nj_2pi_mhz = 50\nomega_o_2pi_mhz = 5\n"
             "[simulate]\npulse_file = /nonexistent.json\n[noise]\nfock_cutoff = -3\n");
  auto res = run_cli("simulate --config " + (dir / "bad.ini").string() + " --out " +
                         dir.string(),
                     dir);
  CHECK(res.exit_code == 2);
  CHECK(!fs::exists(dir / "run.json"));
}

TEST_CASE("unknown config keys are rejected") {
  auto dir = sandbox("unknown_key");
  write_file(dir / "typo.ini",
             "[model]\nj_over_omega = 10\n[plan]\nt_start = 6.0\nn_stepps = 100\n");
  auto res = run_cli("optimize --config " + (dir / "typo.ini").string() + " --out " +
                         dir.string(),
                     dir);
  CHECK(res.exit_code == 2);
  CHECK(!fs::exists(dir / "run.json"));
}

TEST_CASE("piecewise command emits a deterministic run record") {
  auto dir1 = sandbox("piecewise1");
  auto dir2 = sandbox("piecewise2");
  write_file(dir1 / "pw.ini", "[piecewise]\nbranch = sqrt3_minus\nomega_mw_ratio = 10\n");
  fs::copy_file(dir1 / "pw.ini", dir2 / "pw.ini");
  setenv("SOURCE_DATE_EPOCH", "1754000000", 1);
  auto r1 = run_cli("piecewise --config " + (dir1 / "pw.ini").string() + " --out " +
                        dir1.string(),
                    dir1);
  auto r2 = run_cli("piecewise --config " + (dir2 / "pw.ini").string() + " --out " +
                        dir2.string(),
                    dir2);
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  std::ifstream f1(dir1 / "run.json"), f2(dir2 / "run.json");
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str()); // bitwise identical records

  auto j = nlohmann::json::parse(s1.str());
  CHECK(j["kind"] == "run_record");
  CHECK(j["metrics"]["bell_infidelity"].get<double>() < 1e-10);
  CHECK(j["metrics"]["predicted_time_omega_o"].get<double>() ==
        doctest::Approx(6.8274).epsilon(1e-4));
}

TEST_CASE("simulate command round-trips a pulse file") {
  auto dir = sandbox("simulate");
  // A trivial pulse: zero microwave, short duration.
  Pulse p;
  p.n_steps = 20;
  p.total_time = 0.5;
  p.phi_mw = VectorXd::Zero(20);
  p.omega_mw = VectorXd::Zero(20);
  p.delta_o = 0.0;
  p.theta = 0.0;
  io::write_pulse(dir / "pulse.json", p);
  write_file(dir / "sim.ini",
             "[model]\nspecies = Rb\nn = 40\nj_2pi_mhz = 50\nomega_o_2pi_mhz = 5\n"
             "[simulate]\npulse_file = " + (dir / "pulse.json").string() + "\n" +
             "[noise]\nfock_cutoff = 4\ntrap_khz = 100\n");
  auto res = run_cli("simulate --config " + (dir / "sim.ini").string() + " --out " +
                         dir.string(),
                     dir);
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(std::ifstream(dir / "run.json"));
  // Zero microwave, theta = 0: identity gate => F = 1/4 up to tiny motion.
  CHECK(j["metrics"]["bell_infidelity"].get<double>() == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(j["config"]["noise"]["fock_cutoff"] == 4);
}
