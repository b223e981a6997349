// Subcommand drivers: run a configured experiment, write CSV/SVG outputs and
// a manifest into the output directory, and map failures to exit codes.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "intricacy/harness/config.hpp"

namespace intricacy::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitVerify = 4,
};

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out_dir = "out";
  bool plot = false;
};

/// Runs one of indexed, kmc, pde, front, census, verify. Reports go to
/// `log`, errors to `err`. Always writes manifest.json unless the output
/// directory itself cannot be created.
int run_subcommand(const std::string& name, const RunContext& ctx, std::ostream& log,
                   std::ostream& err);

}  // namespace intricacy::harness
