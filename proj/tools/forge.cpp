#include <CLI11.hpp>

#include "forge/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pulse synthesis and noise analysis for dipolar-exchange Rydberg CZ gates"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::uint64_t seed = 20240;
  int threads = 1;

  const std::vector<std::string> commands = {"optimize", "robustify", "simulate", "sweep",
                                             "piecewise", "baseline", "twophoton", "tables"};
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file (INI format)");
    sub->add_option("--set", overrides, "override a config value: section.key=value");
    sub->add_option("--out", out_dir, "output directory (default: current)");
    sub->add_option("--seed", seed, "random seed for multi-start optimizations");
    sub->add_option("--threads", threads, "worker thread count");
  }

  CLI11_PARSE(app, argc, argv);
  auto* sub = app.get_subcommands().front();

  forge::runner::RunContext ctx;
  try {
    if (!config_path.empty())
      ctx.config = forge::cfg::Config::parse_file(config_path);
    else if (sub->get_name() != "tables")
      throw forge::ValidationError("--config is required for this command");
    for (const auto& kv : overrides) ctx.config.apply_override(kv);
  } catch (const std::exception& e) {
    forge::runner::log_error(e.what());
    return forge::runner::kExitValidation;
  }
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  ctx.threads = threads;
  return forge::runner::run_command(sub->get_name(), ctx);
}
