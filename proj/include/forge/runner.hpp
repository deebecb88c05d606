#pragma once

#include <filesystem>
#include <string>

#include "forge/config.hpp"

namespace forge::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoConvergence = 3;

struct RunContext {
  cfg::Config config;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 20240;
  int threads = 1;
};

/// Executes one CLI command against a parsed configuration. Writes the
/// RunRecord and data tables into out_dir. Returns the process exit code;
/// validation failures produce no outputs.
int run_command(const std::string& command, RunContext& ctx);

/// Logging with levels {error, info, debug} selected by FORGE_LOG.
int log_level();
void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace forge::runner
