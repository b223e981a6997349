// Configured runs shared by the CLI subcommands, `verify` and the acceptance
// binary. Nothing here touches the filesystem.
#pragma once

#include <optional>
#include <vector>

#include "intricacy/evolution.hpp"
#include "intricacy/front_fit.hpp"
#include "intricacy/harness/config.hpp"

namespace intricacy::harness {

struct MeasureRow {
  double t = 0.0;
  int atom = 0;
  int channel = 0;
  IntricacyMeasures m;
  /// |p1 + p0 + interference - 1|
  double identity_error = 0.0;
};

struct IndexedRun {
  StateLayout layout;
  std::vector<Snapshot> snapshots;
  std::vector<MeasureRow> measures;
  double max_identity_error = 0.0;
  double max_abs_interference = 0.0;
  double max_norm_drift = 0.0;
  /// Max amplitude error against the dense exponential, when computed.
  std::optional<double> oracle_error;
  /// L2 distance between the projected trajectory and the standard solver
  /// at t_end, when computed.
  std::optional<double> standard_error;
};

/// Evolves the configured system and records measures for every atom and
/// channel at every snapshot. The dense comparisons run when `oracle` is set
/// and the extended space has at most `oracle_limit` entries.
IndexedRun run_indexed_experiment(const IndexedSection& section, std::int64_t oracle_limit = 4096);

struct ConstrainedFrontRun {
  kinetics::FieldHistory history;
  std::vector<double> t, left, right;
  /// max |front - (z0 +- v t)| over the fit window.
  double max_deviation = 0.0;
  double speed = 0.0;
  /// Speed of the f1 = 0.5 level over the second half of the run, when
  /// that level exists in enough samples.
  std::optional<double> level_speed;
  /// min f1 at least 8 units behind either front at t_end.
  double interior_min = 0.0;
};

ConstrainedFrontRun run_constrained_front(const PdeSection& pde);

struct FreeFrontRun {
  std::vector<double> dx;
  std::vector<double> speed;
  std::vector<std::vector<double>> t, right;
};

FreeFrontRun run_free_fronts(const PdeSection& pde);

struct MultichannelRun {
  kinetics::FieldHistory history;
  double final_f1 = 0.0;
  double final_f2 = 0.0;
  double max_simplex_error = 0.0;
  double max_ratio_drift = 0.0;
};

/// Spatially uniform seeding f1 = eps p1, f2 = eps p2.
MultichannelRun run_uniform_multichannel(const PdeSection& pde);

struct KmcRun {
  double diameter = 0.0;
  double packing_fraction = 0.0;
  double speed_scale = 0.0;
  std::int64_t seeded = 0;
  kmc::ContagionHistory history;
  kmc::FrontFit fit;
  std::optional<kmc::ContagionHistory> control;
  std::optional<kmc::FrontFit> control_fit;
};

KmcRun run_kmc_experiment(const KmcSection& section);

/// Growth exponent below which the control spread counts as sublinear.
constexpr double kSublinearExponent = 0.75;

}  // namespace intricacy::harness
