#include "intricacy/field_kinetics.hpp"

#include <sstream>

#include "intricacy/errors.hpp"
#include "intricacy/front_fit.hpp"

namespace intricacy::kinetics {

namespace {

constexpr double kSimplexTolerance = 1e-10;

Eigen::VectorXd laplacian(const FieldGrid& g, const Eigen::VectorXd& f) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd out(n);
  const double inv = 1.0 / (g.dx * g.dx);
  if (n == 1) return Eigen::VectorXd::Zero(1);
  if (g.geometry == Geometry::planar) {
    out[0] = 2.0 * (f[1] - f[0]) * inv;
    out[n - 1] = 2.0 * (f[n - 2] - f[n - 1]) * inv;
    for (Eigen::Index i = 1; i + 1 < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv;
  } else {
    // f'' + (2/r) f'; at r = 0 the limit is 3 f''(0).
    out[0] = 6.0 * (f[1] - f[0]) * inv;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const double r = g.coordinate(i);
      out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv + (f[i + 1] - f[i - 1]) / (r * g.dx);
    }
    out[n - 1] = 2.0 * (f[n - 2] - f[n - 1]) * inv;
  }
  return out;
}

void clamp_outside(const FieldGrid& g, Eigen::VectorXd& f, const FrontConstraint& c) {
  if (!c.enabled) return;
  const double reach = c.speed * g.t;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double z = g.coordinate(i);
    if (z < c.source_z - reach || z > c.source_z + reach) f[i] = 0.0;
  }
}

void check_step(const FieldGrid& g, double dt) {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  const double limit = stability_limit(g);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the explicit stability bound "
        << (g.geometry == Geometry::planar ? "3 dx^2 = " : "dx^2 = ") << limit;
    throw ConfigError(msg.str());
  }
}

void check_simplex(const FieldGrid& g) {
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double lo = std::min({g.f0[i], g.f1[i], g.f2[i]});
    const double hi = std::max({g.f0[i], g.f1[i], g.f2[i]});
    const double sum = g.f0[i] + g.f1[i] + g.f2[i];
    if (lo < -kSimplexTolerance || hi > 1.0 + kSimplexTolerance ||
        std::abs(sum - 1.0) > kSimplexTolerance) {
      std::ostringstream msg;
      msg << "simplex violated at z = " << g.coordinate(i) << ", t = " << g.t << ": (" << g.f0[i]
          << ", " << g.f1[i] << ", " << g.f2[i] << ")";
      throw NumericAbort(msg.str());
    }
  }
}

FieldSnapshot snapshot(const FieldGrid& g) { return {g.t, g.f0, g.f1, g.f2}; }

// Steps are shrunk so that every sample time is hit exactly; the last step
// may be shorter to land on t_end.
template <typename Step>
FieldHistory integrate(FieldGrid grid, double dt, double t_end, double sample_interval, Step step) {
  check_step(grid, dt);
  if (!(t_end >= 0)) throw ConfigError("t_end must be non-negative");
  const double interval = sample_interval > 0 ? std::min(sample_interval, t_end) : t_end;
  const long per_sample = interval > 0 ? std::max(1L, static_cast<long>(std::ceil(interval / dt - 1e-9))) : 1;
  const double h = interval > 0 ? interval / static_cast<double>(per_sample) : dt;
  FieldHistory hist;
  hist.z = grid.coordinates();
  hist.dx = grid.dx;
  hist.snapshots.push_back(snapshot(grid));
  if (t_end == 0) return hist;
  const double t0 = grid.t;
  for (long s = 1;; ++s) {
    const double target = t0 + static_cast<double>(s) * h;
    const bool last = target >= t0 + t_end - 1e-9 * h;
    const double t_next = last ? t0 + t_end : target;
    if (t_next > grid.t) {
      step(grid, t_next - grid.t);
      grid.t = t_next;  // no accumulated drift
    }
    if (last || s % per_sample == 0) hist.snapshots.push_back(snapshot(grid));
    if (last) break;
  }
  return hist;
}

}  // namespace

FieldGrid FieldGrid::planar(double z_min, double z_max, double dx, bool multichannel) {
  if (!(dx > 0) || !(z_max > z_min)) throw ConfigError("invalid planar grid");
  FieldGrid g;
  g.geometry = Geometry::planar;
  g.origin = z_min;
  g.dx = dx;
  g.multichannel = multichannel;
  const auto n = static_cast<Eigen::Index>(std::llround((z_max - z_min) / dx)) + 1;
  g.f0 = Eigen::VectorXd::Ones(n);
  g.f1 = Eigen::VectorXd::Zero(n);
  g.f2 = Eigen::VectorXd::Zero(n);
  return g;
}

FieldGrid FieldGrid::radial(double r_max, double dr, bool multichannel) {
  FieldGrid g = planar(0.0, r_max, dr, multichannel);
  g.geometry = Geometry::radial;
  return g;
}

Eigen::VectorXd FieldGrid::coordinates() const {
  Eigen::VectorXd z(size());
  for (Eigen::Index i = 0; i < size(); ++i) z[i] = coordinate(i);
  return z;
}

Eigen::Index FieldGrid::nearest_node(double z) const {
  const auto i = static_cast<Eigen::Index>(std::llround((z - origin) / dx));
  if (i < 0 || i >= size()) throw ConfigError("source position outside the grid");
  if (std::abs(coordinate(i) - z) > 1e-9 * std::max(1.0, std::abs(z)))
    throw ConfigError("source position is not on a grid node");
  return i;
}

double stability_limit(const FieldGrid& grid) {
  // Explicit diffusion needs D dt / dx^2 <= 1/2 planar, 6 D dt / dr^2 <= 1 at r = 0.
  return grid.geometry == Geometry::planar ? grid.dx * grid.dx / (2.0 * kDiffusion)
                                           : grid.dx * grid.dx / (6.0 * kDiffusion);
}

void step_fkpp(FieldGrid& grid, double dt, const FrontConstraint& constraint) {
  check_step(grid, dt);
  const Eigen::VectorXd lap = laplacian(grid, grid.f1);
  grid.f1.array() += dt * (grid.f1.array() * (1.0 - grid.f1.array()) + kDiffusion * lap.array());
  grid.t += dt;
  clamp_outside(grid, grid.f1, constraint);
  grid.f0 = (1.0 - grid.f1.array() - grid.f2.array()).matrix();
}

void step_multichannel(FieldGrid& grid, double dt, const std::array<FrontConstraint, 2>& constraints) {
  check_step(grid, dt);
  const Eigen::VectorXd lap1 = laplacian(grid, grid.f1);
  const Eigen::VectorXd lap2 = laplacian(grid, grid.f2);
  const Eigen::ArrayXd f0 = grid.f0.array();
  grid.f1.array() += dt * (grid.f1.array() * f0 + kDiffusion * lap1.array());
  grid.f2.array() += dt * (grid.f2.array() * f0 + kDiffusion * lap2.array());
  grid.t += dt;
  clamp_outside(grid, grid.f1, constraints[0]);
  clamp_outside(grid, grid.f2, constraints[1]);
  grid.f0 = (1.0 - grid.f1.array() - grid.f2.array()).matrix();
  check_simplex(grid);
}

FieldHistory solve_planar_source(FieldGrid grid, double source_z, double amplitude, double dt,
                                 double t_end, const FrontConstraint& constraint,
                                 double sample_interval) {
  if (!(amplitude > 0.0 && amplitude <= 1.0)) throw ConfigError("source amplitude must be in (0, 1]");
  grid.f1[grid.nearest_node(source_z)] = amplitude;
  grid.f0 = (1.0 - grid.f1.array() - grid.f2.array()).matrix();
  return integrate(std::move(grid), dt, t_end, sample_interval,
                   [&](FieldGrid& g, double h) { step_fkpp(g, h, constraint); });
}

FieldHistory solve_multichannel(FieldGrid grid, double dt, double t_end,
                                const std::array<FrontConstraint, 2>& constraints,
                                double sample_interval) {
  grid.f0 = (1.0 - grid.f1.array() - grid.f2.array()).matrix();
  check_simplex(grid);
  return integrate(std::move(grid), dt, t_end, sample_interval,
                   [&](FieldGrid& g, double h) { step_multichannel(g, h, constraints); });
}

std::optional<FrontPosition> threshold_front(const Eigen::VectorXd& z, const Eigen::VectorXd& f,
                                             double threshold) {
  const Eigen::Index n = f.size();
  Eigen::Index lo = -1, hi = -1;
  for (Eigen::Index i = 0; i < n; ++i)
    if (f[i] >= threshold) {
      if (lo < 0) lo = i;
      hi = i;
    }
  if (lo < 0) return std::nullopt;
  FrontPosition p;
  p.right = z[hi];
  if (hi + 1 < n) p.right += (z[hi + 1] - z[hi]) * (f[hi] - threshold) / (f[hi] - f[hi + 1]);
  p.left = z[lo];
  if (lo > 0) p.left -= (z[lo] - z[lo - 1]) * (f[lo] - threshold) / (f[lo] - f[lo - 1]);
  return p;
}

double front_speed(const FieldHistory& history, double threshold, double t_from, double t_to) {
  std::vector<double> t, z;
  for (const auto& s : history.snapshots) {
    if (s.t < t_from - 1e-9 || s.t > t_to + 1e-9) continue;
    if (auto p = threshold_front(history.z, s.f1, threshold)) {
      t.push_back(s.t);
      z.push_back(p->right);
    }
  }
  if (t.size() < 2) throw NumericAbort("not enough front samples to fit a speed");
  return kmc::fit_line(t, z).slope;
}

}  // namespace intricacy::kinetics
