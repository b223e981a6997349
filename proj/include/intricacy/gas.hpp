// Event-driven hard-sphere gas carrying intricacy tags.
//
// Units: mean free path lambda = 1, speed scale v = sqrt(3 k T / 2 m) = 1,
// so the mean free time is tau = lambda / v = 1. With these units the
// per-component velocity spread is sqrt(2/3) and <|v|^2> = 2. The 1D speed
// v' = v / sqrt(3) is the nominal front speed.
//
// Boundaries: periodic in x and y, reflecting walls in z.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace intricacy::kmc {

constexpr int kMaxChannels = 2;

struct GasParams {
  std::int64_t n_particles = 100000;
  Eigen::Vector3d box{20.0, 20.0, 60.0};
  /// Packing fractions above this are rejected (dilute-gas assumption).
  double max_packing_fraction = 0.05;
  std::uint64_t seed = 12345;
  /// Cell-list width; 0 picks a default of max(0.6, diameter).
  double cell_size = 0.0;

  double number_density() const { return n_particles / box.prod(); }
  void validate() const;
};

/// Per-component Maxwell-Boltzmann standard deviation for v = 1.
double component_sigma();

/// Sphere diameter giving lambda = 1 at the configured density, including the
/// Carnahan-Starling contact-value enhancement of the collision rate.
double hard_sphere_diameter(const GasParams& params);

struct GasEnsemble {
  GasParams params;
  double diameter = 0.0;
  double time = 0.0;
  std::vector<Eigen::Vector3d> position;
  std::vector<Eigen::Vector3d> velocity;
  std::vector<int> tag;

  std::size_t size() const { return position.size(); }
  double kinetic_energy() const;
  Eigen::Vector3d momentum() const;
  /// sqrt(<|v|^2> / 2), the sampled estimate of the speed scale v.
  double speed_scale() const;
  double packing_fraction() const;
  std::array<std::int64_t, kMaxChannels + 1> tag_counts() const;
};

/// Random non-overlapping placement and Maxwell-Boltzmann velocities with
/// zero total momentum. Throws ConfigError if placement fails.
GasEnsemble init_gas(const GasParams& params);

struct SourceSpec {
  enum class Geometry { plane, track, point };
  Geometry geometry = Geometry::plane;
  /// plane: slab |z - plane_z| <= thickness / 2.
  double plane_z = 30.0;
  double thickness = 1.0;
  /// track: segment start..end; point: start. Both use `radius`.
  Eigen::Vector3d start{10.0, 10.0, 30.0};
  Eigen::Vector3d end{10.0, 10.0, 30.0};
  double radius = 1.0;
  /// Keep tagging particles that enter the region during the run.
  bool continuous = false;
  int channel = 1;

  bool contains(const Eigen::Vector3d& r, const Eigen::Vector3d& box) const;
  bool empty() const;
};

/// Tags untagged particles inside the source region. Returns the number
/// tagged; an empty region is a no-op and logs a warning to stderr.
std::int64_t inject_source(GasEnsemble& ensemble, const SourceSpec& source);

/// What happens when particles intricate with different channels meet.
enum class MixedPolicy {
  elastic,       // scatter elastically, tags unchanged
  pass_through,  // no interaction at all
};

struct RunOptions {
  bool contagion = true;
  MixedPolicy mixed = MixedPolicy::elastic;
  double bin_width = 0.5;
  /// Sources with `continuous` set are re-applied at this interval.
  std::vector<SourceSpec> continuous_sources;
  double source_refresh = 0.1;
};

struct ContagionSample {
  double t = 0.0;
  /// counts[bin][mu]: particles with tag mu in the z bin.
  std::vector<std::array<std::int64_t, kMaxChannels + 1>> counts;
  std::array<std::int64_t, kMaxChannels + 1> totals{};

  std::int64_t bin_total(std::size_t bin) const;
  /// Fraction with tag mu in the bin; 0 for an empty bin.
  double fraction(std::size_t bin, int mu) const;
};

struct ContagionHistory {
  double bin_width = 0.5;
  double box_z = 0.0;
  std::vector<double> bin_centers;
  std::vector<ContagionSample> samples;
  std::int64_t collisions = 0;
  std::int64_t contagion_events = 0;
  std::int64_t wall_hits = 0;
  double duration = 0.0;
  double energy_start = 0.0;
  double energy_end = 0.0;
  /// Worst per-collision relative energy / momentum change.
  double max_energy_error = 0.0;
  double max_momentum_error = 0.0;
  /// Tag counts never decreased between consecutive samples.
  bool tags_monotone = true;
};

/// Advances the ensemble to ensemble.time + duration with exact event-driven
/// dynamics, sampling binned tag fractions at the given absolute times.
/// Throws NumericAbort on an inconsistent event queue.
ContagionHistory run_contagion(GasEnsemble& ensemble, double duration,
                               const std::vector<double>& sample_times,
                               const RunOptions& options = {});

struct MeanFreePath {
  double mean_free_time = 0.0;
  double mean_free_path = 0.0;
  double speed_scale = 0.0;
};

/// Measures tau = N T / (2 collisions) and lambda = v tau over a short run.
MeanFreePath measure_mean_free_path(GasEnsemble& ensemble, double duration);

}  // namespace intricacy::kmc
