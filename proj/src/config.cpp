#include "forge/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace forge::cfg {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& where, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config value '" + where + " = " + value + "' is not a number");
  }
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ValidationError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      cfg.sections_[section];
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path.string());
}

void Config::apply_override(const std::string& dotted) {
  size_t eq = dotted.find('=');
  if (eq == std::string::npos)
    throw ValidationError("--set expects section.key=value, got '" + dotted + "'");
  std::string key_path = trim(dotted.substr(0, eq));
  std::string value = trim(dotted.substr(eq + 1));
  size_t dot = key_path.find('.');
  if (dot == std::string::npos)
    throw ValidationError("--set expects section.key=value, got '" + dotted + "'");
  sections_[key_path.substr(0, dot)][key_path.substr(dot + 1)] = value;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  consumed_[section + "." + key] = true;
  return &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_str(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

std::string Config::require_str(const std::string& section, const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v) throw ValidationError("missing config key '" + section + "." + key + "'");
  return *v;
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
  const std::string* v = find(section, key);
  return v ? parse_number(section + "." + key, *v) : fallback;
}

double Config::require_num(const std::string& section, const std::string& key) const {
  return parse_number(section + "." + key, require_str(section, key));
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  double v = get_num(section, key, fallback);
  int i = static_cast<int>(v);
  if (v != i)
    throw ValidationError("config value '" + section + "." + key + "' must be an integer");
  return i;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ValidationError("config value '" + section + "." + key + "' must be a boolean");
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    throw ValidationError("config value '" + section + "." + key +
                          "' must be an unsigned integer");
  }
}

std::vector<double> Config::get_num_list(const std::string& section, const std::string& key,
                                         const std::vector<double>& fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number(section + "." + key, item));
  }
  if (out.empty())
    throw ValidationError("config value '" + section + "." + key + "' must be a list");
  return out;
}

std::vector<std::string> Config::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [section, kv] : sections_)
    for (const auto& [key, value] : kv) {
      std::string path = section + "." + key;
      if (!consumed_.count(path)) out.push_back(path);
    }
  return out;
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [section, kv] : sections_) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [key, value] : kv) s[key] = value;
    j[section] = s;
  }
  return j;
}

}  // namespace forge::cfg
