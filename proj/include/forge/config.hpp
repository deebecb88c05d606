#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "forge/common.hpp"

namespace forge::cfg {

/// INI-style run configuration: [section] headers, key = value lines,
/// comments with '#' or ';'. Values are typed on access; every access is
/// recorded so unknown (misspelled) keys can be rejected after a command
/// has consumed its options.
class Config {
 public:
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  /// Applies a "section.key=value" override (CLI --set flag).
  void apply_override(const std::string& dotted_assignment);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  std::string require_str(const std::string& section, const std::string& key) const;
  double get_num(const std::string& section, const std::string& key, double fallback) const;
  double require_num(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  std::vector<double> get_num_list(const std::string& section, const std::string& key,
                                   const std::vector<double>& fallback) const;

  /// Keys present in the file but never accessed; used to reject typos.
  std::vector<std::string> unconsumed() const;

  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::map<std::string, bool> consumed_;
  std::string origin_;

  const std::string* find(const std::string& section, const std::string& key) const;
};

}  // namespace forge::cfg
