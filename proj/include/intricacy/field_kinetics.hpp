// Explicit finite-difference transport of local intricacy probabilities.
//
//   d f1/dt = f1 f0 + D lap f1             (single channel: f0 = 1 - f1)
//   d f2/dt = f2 f0 + D lap f2             (second channel)
//   f0      = 1 - f1 - f2                   (so d f0/dt = -f0(f1+f2) + D lap f0)
//
// with D = 1/6 in mean-free-path / mean-free-time units. Ends of the domain
// are zero-flux. An optional moving-front constraint forces f_j = 0 outside
// [z0 - v t, z0 + v t].
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace intricacy::kinetics {

constexpr double kDiffusion = 1.0 / 6.0;
inline const double kSoundSpeed = 1.0 / std::sqrt(3.0);

enum class Geometry {
  planar,  // 1D slab coordinate z
  radial,  // spherically symmetric 3D, r >= 0, regular at r = 0
};

struct FieldGrid {
  Geometry geometry = Geometry::planar;
  double origin = 0.0;
  double dx = 0.1;
  double t = 0.0;
  bool multichannel = false;
  Eigen::VectorXd f0, f1, f2;

  static FieldGrid planar(double z_min, double z_max, double dx, bool multichannel = false);
  static FieldGrid radial(double r_max, double dr, bool multichannel = false);

  Eigen::Index size() const { return f1.size(); }
  double coordinate(Eigen::Index i) const { return origin + static_cast<double>(i) * dx; }
  Eigen::VectorXd coordinates() const;
  Eigen::Index nearest_node(double z) const;
};

struct FrontConstraint {
  bool enabled = false;
  double speed = kSoundSpeed;
  double source_z = 0.0;
};

/// Largest stable explicit step: 3 dx^2 planar, dx^2 radial (centre node).
double stability_limit(const FieldGrid& grid);

/// Default step, half the stability limit.
inline double default_time_step(const FieldGrid& grid) { return 0.5 * stability_limit(grid); }

/// One forward-Euler step of the single-channel equation, then the clamp.
void step_fkpp(FieldGrid& grid, double dt, const FrontConstraint& constraint = {});

/// One forward-Euler step of the two-channel system, clamping each channel
/// against its own constraint. Throws NumericAbort on simplex violation.
void step_multichannel(FieldGrid& grid, double dt,
                       const std::array<FrontConstraint, 2>& constraints = {});

struct FieldSnapshot {
  double t = 0.0;
  Eigen::VectorXd f0, f1, f2;
};

struct FieldHistory {
  Eigen::VectorXd z;
  double dx = 0.0;
  std::vector<FieldSnapshot> snapshots;
};

/// Point-like planar source: f1 = amplitude on the node nearest z0, then
/// step_fkpp to t_end. Snapshots every sample_interval (and at t_end).
FieldHistory solve_planar_source(FieldGrid grid, double source_z, double amplitude, double dt,
                                 double t_end, const FrontConstraint& constraint,
                                 double sample_interval);

/// Runs the two-channel system from the grid's current fields.
FieldHistory solve_multichannel(FieldGrid grid, double dt, double t_end,
                                const std::array<FrontConstraint, 2>& constraints,
                                double sample_interval);

struct FrontPosition {
  double left = 0.0;
  double right = 0.0;
};

/// Outermost threshold crossings, linearly interpolated between nodes.
std::optional<FrontPosition> threshold_front(const Eigen::VectorXd& z, const Eigen::VectorXd& f,
                                             double threshold);

/// Least-squares slope of the right threshold front over [t_from, t_to].
double front_speed(const FieldHistory& history, double threshold, double t_from, double t_to);

}  // namespace intricacy::kinetics
