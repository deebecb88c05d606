#include "forge/serialize.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

namespace forge::io {

using nlohmann::json;

namespace {

void check_field(const json& j, const char* name, const char* type) {
  if (!j.contains(name))
    throw ValidationError(std::string("missing field '") + name + "'");
  const auto& v = j.at(name);
  bool ok = (std::string(type) == "number" && v.is_number()) ||
            (std::string(type) == "integer" && v.is_number_integer()) ||
            (std::string(type) == "array" && v.is_array()) ||
            (std::string(type) == "string" && v.is_string());
  if (!ok)
    throw ValidationError(std::string("field '") + name + "' must be of type " + type);
}

void check_header(const json& j, const std::string& kind) {
  check_field(j, "format_version", "integer");
  int version = j.at("format_version").get<int>();
  if (version != kFormatVersion)
    throw ValidationError("field 'format_version' = " + std::to_string(version) +
                          " is not supported (expected " +
                          std::to_string(kFormatVersion) + ")");
  check_field(j, "kind", "string");
  std::string k = j.at("kind").get<std::string>();
  if (k != kind)
    throw ValidationError("field 'kind' = '" + k + "' (expected '" + kind + "')");
}

VectorXd samples_field(const json& j, const char* name, int n_steps) {
  check_field(j, name, "array");
  const auto& arr = j.at(name);
  if (static_cast<int>(arr.size()) != n_steps)
    throw ValidationError(std::string("field '") + name + "' has length " +
                          std::to_string(arr.size()) + " but n_steps = " +
                          std::to_string(n_steps));
  VectorXd v(n_steps);
  for (int i = 0; i < n_steps; ++i) {
    if (!arr[i].is_number())
      throw ValidationError(std::string("field '") + name + "' must hold numbers");
    v(i) = arr[i].get<double>();
  }
  return v;
}

json samples_to_json(const VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

int n_steps_field(const json& j) {
  check_field(j, "n_steps", "integer");
  int n = j.at("n_steps").get<int>();
  if (n < 1) throw ValidationError("field 'n_steps' must be >= 1");
  return n;
}

double number_field(const json& j, const char* name) {
  check_field(j, name, "number");
  return j.at(name).get<double>();
}

}  // namespace

json to_json(const Pulse& pulse) {
  return json{{"format_version", kFormatVersion},
              {"kind", "four_level"},
              {"n_steps", pulse.n_steps},
              {"total_time_omega_o", pulse.total_time},
              {"phi_mw_rad", samples_to_json(pulse.phi_mw)},
              {"omega_mw_omega_o", samples_to_json(pulse.omega_mw)},
              {"delta_o_omega_o", pulse.delta_o},
              {"theta_rad", pulse.theta}};
}

json to_json(const EffectiveVdwControls& controls) {
  return json{{"format_version", kFormatVersion},
              {"kind", "effective_vdw"},
              {"n_steps", controls.n_steps},
              {"total_time_omega_o", controls.total_time},
              {"inv_tau_omega_o", samples_to_json(controls.inv_tau)},
              {"delta_o_omega_o", controls.delta_o},
              {"theta_rad", controls.theta}};
}

json to_json(const BaselinePulse& pulse) {
  return json{{"format_version", kFormatVersion},
              {"kind", "baseline_phase"},
              {"n_steps", pulse.n_steps},
              {"total_time_omega_o", pulse.total_time},
              {"phi_o_rad", samples_to_json(pulse.phi_o)},
              {"theta_rad", pulse.theta}};
}

Pulse pulse_from_json(const json& j) {
  check_header(j, "four_level");
  Pulse p;
  p.n_steps = n_steps_field(j);
  p.total_time = number_field(j, "total_time_omega_o");
  p.phi_mw = samples_field(j, "phi_mw_rad", p.n_steps);
  p.omega_mw = samples_field(j, "omega_mw_omega_o", p.n_steps);
  p.delta_o = number_field(j, "delta_o_omega_o");
  p.theta = number_field(j, "theta_rad");
  if (p.omega_mw.minCoeff() < 0.0)
    throw ValidationError("field 'omega_mw_omega_o' must be non-negative");
  return p;
}

EffectiveVdwControls effective_from_json(const json& j) {
  check_header(j, "effective_vdw");
  EffectiveVdwControls c;
  c.n_steps = n_steps_field(j);
  c.total_time = number_field(j, "total_time_omega_o");
  c.inv_tau = samples_field(j, "inv_tau_omega_o", c.n_steps);
  c.delta_o = number_field(j, "delta_o_omega_o");
  c.theta = number_field(j, "theta_rad");
  return c;
}

BaselinePulse baseline_from_json(const json& j) {
  check_header(j, "baseline_phase");
  BaselinePulse p;
  p.n_steps = n_steps_field(j);
  p.total_time = number_field(j, "total_time_omega_o");
  p.phi_o = samples_field(j, "phi_o_rad", p.n_steps);
  p.theta = number_field(j, "theta_rad");
  return p;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

void write_pulse(const std::filesystem::path& path, const Pulse& pulse) {
  write_json_file(path, to_json(pulse));
}

Pulse read_pulse(const std::filesystem::path& path) {
  return pulse_from_json(read_json_file(path));
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    long long v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace forge::io
