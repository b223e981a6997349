// Experiment configuration: an INI-style file with [indexed], [kmc], [pde],
// [front] and [census] sections of `key = value` lines. `#` and `;` start
// comments. Unknown sections or keys are errors. Every key has a default, and
// the defaults are the acceptance runs.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "intricacy/census.hpp"
#include "intricacy/field_kinetics.hpp"
#include "intricacy/front_profile.hpp"
#include "intricacy/gas.hpp"
#include "intricacy/lattice.hpp"

namespace intricacy::harness {

struct IndexedSection {
  LatticeConfig lattice;
  PairPotential potential;
  MCoupling coupling;
  double snapshot_interval = 0.1;
  int measure_atom = 0;
  int measure_channel = 1;
  /// Compare against the dense exponential when the system is small enough.
  bool oracle = true;

  IndexedSection();
};

struct KmcSection {
  kmc::GasParams gas;
  kmc::SourceSpec source;
  kmc::RunOptions run;
  double t_end = 25.0;
  double sample_interval = 1.0;
  double threshold = 0.05;
  double fit_start = 5.0;
  /// Also run the contagion-disabled control from the same initial state.
  bool control = true;
};

struct PdeSection {
  kinetics::Geometry geometry = kinetics::Geometry::planar;
  double z_min = 0.0;
  double z_max = 120.0;
  double dx = 0.1;
  /// <= 0 picks half the stability limit.
  double dt = 0.0;
  double t_end = 50.0;
  double sample_interval = 0.5;
  double source_z = 60.0;
  double amplitude = 1.0;
  bool constraint_enabled = true;
  double constraint_speed = kinetics::kSoundSpeed;
  /// Level locating the constrained front: small enough to mark the edge
  /// of the support.
  double threshold = 1e-12;
  double fit_start = 5.0;

  bool free_enabled = true;
  std::vector<double> free_dx{0.2, 0.1, 0.05};
  double free_t_end = 100.0;
  double free_z_max = 200.0;
  double free_threshold = 0.5;

  bool multichannel_enabled = true;
  double multichannel_p1 = 0.3;
  double multichannel_p2 = 0.7;
  double multichannel_epsilon = 1e-3;
  double multichannel_t_end = 40.0;

  double resolved_dt() const;
  void validate() const;
};

struct ExperimentConfig {
  IndexedSection indexed;
  KmcSection kmc;
  PdeSection pde;
  front::FrontOptions front;
  census::CensusInputs census;

  /// Resolved values as (section.key, value) pairs, in declaration order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Shortest round-trip decimal form, locale independent.
std::string format_number(double value);

}  // namespace intricacy::harness
