// intricacy <subcommand> [--config FILE] [--out DIR] [--seed N] [--plot]
#include <iostream>

#include <CLI11.hpp>

#include "intricacy/errors.hpp"
#include "intricacy/harness/output.hpp"
#include "intricacy/harness/runners.hpp"

int main(int argc, char** argv) {
  using namespace intricacy::harness;
  CLI::App app{"Numerical laboratory for intricacy kinetics"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool plot = false;
  app.add_option("--config", config_path, "INI experiment config (defaults if omitted)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "override kmc.seed");
  app.add_flag("--plot", plot, "also write SVG plots");

  const std::pair<const char*, const char*> commands[] = {
      {"indexed", "indexed Schroedinger evolution and intricacy measures"},
      {"kmc", "event-driven hard-sphere contagion"},
      {"pde", "reaction-diffusion fronts"},
      {"front", "travelling-wave profile behind the front"},
      {"census", "environment wave counts"},
      {"verify", "oracle and invariant checks"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.plot = plot;
  try {
    if (!config_path.empty()) ctx.config = load_config(config_path);
    if (seed) ctx.config.kmc.gas.seed = *seed;
  } catch (const intricacy::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return run_subcommand(name, ctx, std::cout, std::cerr);
}
