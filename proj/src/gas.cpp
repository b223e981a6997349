#include "intricacy/gas.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "intricacy/errors.hpp"

namespace intricacy::kmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double contact_value(double packing) {
  return (1.0 - 0.5 * packing) / std::pow(1.0 - packing, 3);
}

double packing_of(double density, double diameter) {
  return density * std::numbers::pi * diameter * diameter * diameter / 6.0;
}

/// Uniform cell grid over the box; x and y wrap, z does not.
struct CellGrid {
  std::array<int, 3> n{};
  Eigen::Vector3d width;

  CellGrid(const Eigen::Vector3d& box, double min_width) {
    for (int a = 0; a < 3; ++a) {
      n[a] = std::max(1, static_cast<int>(std::floor(box[a] / min_width)));
      width[a] = box[a] / n[a];
    }
  }
  int count() const { return n[0] * n[1] * n[2]; }
  int index(int cx, int cy, int cz) const { return (cz * n[1] + cy) * n[0] + cx; }
  int coord(double x, int axis) const {
    return std::clamp(static_cast<int>(std::floor(x / width[axis])), 0, n[axis] - 1);
  }
};

}  // namespace

double component_sigma() { return std::sqrt(2.0 / 3.0); }

void GasParams::validate() const {
  if (n_particles <= 0) throw ConfigError("kmc.n_particles must be positive");
  if ((box.array() <= 0).any()) throw ConfigError("kmc box dimensions must be positive");
  if (!(max_packing_fraction > 0 && max_packing_fraction < 0.5))
    throw ConfigError("packing fraction cap must be in (0, 0.5)");
  const double d = hard_sphere_diameter(*this);
  const double phi = packing_of(number_density(), d);
  if (phi > max_packing_fraction) {
    std::ostringstream msg;
    msg << "packing fraction " << phi << " exceeds cap " << max_packing_fraction
        << "; raise the density (particles per unit volume) to shrink the spheres";
    throw ConfigError(msg.str());
  }
  const double w = cell_size > 0 ? cell_size : std::max(0.6, d);
  if (w < d) throw ConfigError("kmc.cell_size must be at least the sphere diameter");
  for (int a = 0; a < 2; ++a)
    if (box[a] / w < 3.0) throw ConfigError("periodic box needs at least three cells per axis");
  if (box[2] < 2.0 * d) throw ConfigError("box too thin in z");
}

double hard_sphere_diameter(const GasParams& params) {
  // Collision rate per particle: 4 sqrt(pi) n d^2 sigma chi, sigma the
  // per-component spread. Solve lambda = v / rate = 1 for d.
  const double n = params.number_density();
  const double sigma = component_sigma();
  double chi = 1.0, d = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double d_new = std::sqrt(1.0 / (4.0 * std::sqrt(std::numbers::pi) * n * sigma * chi));
    const double phi = packing_of(n, d_new);
    if (phi >= 0.5) return d_new;  // rejected by validate()
    chi = contact_value(phi);
    if (std::abs(d_new - d) < 1e-15) break;
    d = d_new;
  }
  return d;
}

double GasEnsemble::kinetic_energy() const {
  double e = 0.0;
  for (const auto& v : velocity) e += 0.5 * v.squaredNorm();
  return e;
}

Eigen::Vector3d GasEnsemble::momentum() const {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (const auto& v : velocity) p += v;
  return p;
}

double GasEnsemble::speed_scale() const {
  if (velocity.empty()) return 0.0;
  return std::sqrt(2.0 * kinetic_energy() / static_cast<double>(velocity.size()) / 2.0);
}

double GasEnsemble::packing_fraction() const { return packing_of(params.number_density(), diameter); }

std::array<std::int64_t, kMaxChannels + 1> GasEnsemble::tag_counts() const {
  std::array<std::int64_t, kMaxChannels + 1> c{};
  for (int t : tag) ++c[t];
  return c;
}

GasEnsemble init_gas(const GasParams& params) {
  params.validate();
  GasEnsemble g;
  g.params = params;
  g.diameter = hard_sphere_diameter(params);
  const double d = g.diameter, r = 0.5 * d;
  const std::size_t n = static_cast<std::size_t>(params.n_particles);

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> ux(0.0, params.box.x()), uy(0.0, params.box.y()),
      uz(r, params.box.z() - r);
  std::normal_distribution<double> normal(0.0, component_sigma());

  const CellGrid grid(params.box, std::max(d, 1e-12));
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(grid.count()));
  g.position.reserve(n);
  const std::int64_t max_attempts = 100 * static_cast<std::int64_t>(n) + 1000;
  std::int64_t attempts = 0;
  while (g.position.size() < n) {
    if (++attempts > max_attempts)
      throw ConfigError("could not place non-overlapping spheres in bounded attempts");
    const Eigen::Vector3d p(ux(rng), uy(rng), uz(rng));
    const int cx = grid.coord(p.x(), 0), cy = grid.coord(p.y(), 1), cz = grid.coord(p.z(), 2);
    bool overlap = false;
    for (int dz = -1; dz <= 1 && !overlap; ++dz) {
      const int z = cz + dz;
      if (z < 0 || z >= grid.n[2]) continue;
      for (int dy = -1; dy <= 1 && !overlap; ++dy) {
        const int y = (cy + dy + grid.n[1]) % grid.n[1];
        for (int dx = -1; dx <= 1 && !overlap; ++dx) {
          const int x = (cx + dx + grid.n[0]) % grid.n[0];
          for (int j : cells[grid.index(x, y, z)]) {
            Eigen::Vector3d dr = g.position[j] - p;
            for (int a = 0; a < 2; ++a) dr[a] -= params.box[a] * std::round(dr[a] / params.box[a]);
            if (dr.squaredNorm() < d * d) {
              overlap = true;
              break;
            }
          }
        }
      }
    }
    if (overlap) continue;
    cells[grid.index(cx, cy, cz)].push_back(static_cast<int>(g.position.size()));
    g.position.push_back(p);
  }

  g.velocity.resize(n);
  for (auto& v : g.velocity) v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  const Eigen::Vector3d drift = g.momentum() / static_cast<double>(n);
  for (auto& v : g.velocity) v -= drift;
  g.tag.assign(n, 0);
  return g;
}

bool SourceSpec::contains(const Eigen::Vector3d& r, const Eigen::Vector3d& box) const {
  auto wrapped = [&](Eigen::Vector3d dr) {
    for (int a = 0; a < 2; ++a) dr[a] -= box[a] * std::round(dr[a] / box[a]);
    return dr;
  };
  switch (geometry) {
    case Geometry::plane:
      return std::abs(r.z() - plane_z) <= 0.5 * thickness;
    case Geometry::point:
      return wrapped(r - start).norm() <= radius;
    case Geometry::track: {
      const Eigen::Vector3d axis = end - start;
      const Eigen::Vector3d rel = wrapped(r - start);
      const double len2 = axis.squaredNorm();
      const double s = len2 > 0 ? std::clamp(rel.dot(axis) / len2, 0.0, 1.0) : 0.0;
      return (rel - s * axis).norm() <= radius;
    }
  }
  return false;
}

bool SourceSpec::empty() const {
  return geometry == Geometry::plane ? !(thickness > 0) : !(radius > 0);
}

std::int64_t inject_source(GasEnsemble& ensemble, const SourceSpec& source) {
  if (source.channel < 1 || source.channel > kMaxChannels)
    throw ConfigError("source channel must be 1 or 2");
  if (source.empty()) {
    std::cerr << "warning: source region is empty; nothing tagged\n";
    return 0;
  }
  std::int64_t tagged = 0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (ensemble.tag[i] != 0) continue;
    if (source.contains(ensemble.position[i], ensemble.params.box)) {
      ensemble.tag[i] = source.channel;
      ++tagged;
    }
  }
  if (tagged == 0) std::cerr << "warning: source region contains no particles\n";
  return tagged;
}

std::int64_t ContagionSample::bin_total(std::size_t bin) const {
  const auto& c = counts[bin];
  std::int64_t s = 0;
  for (auto v : c) s += v;
  return s;
}

double ContagionSample::fraction(std::size_t bin, int mu) const {
  const std::int64_t total = bin_total(bin);
  return total > 0 ? static_cast<double>(counts[bin][mu]) / static_cast<double>(total) : 0.0;
}

namespace {

/// Exact event-driven dynamics with one live event per particle and lazy
/// invalidation through per-particle trajectory counters.
class EventEngine {
 public:
  EventEngine(GasEnsemble& gas, const RunOptions& options, ContagionHistory& history)
      : gas_(gas),
        options_(options),
        history_(history),
        box_(gas.params.box),
        grid_(gas.params.box,
              gas.params.cell_size > 0 ? gas.params.cell_size : std::max(0.6, gas.diameter)),
        d2_(gas.diameter * gas.diameter),
        radius_(0.5 * gas.diameter),
        now_(gas.time) {
    const std::size_t n = gas.size();
    local_time_.assign(n, now_);
    counter_.assign(n, 0);
    cell_.resize(n);
    slot_.resize(n);
    members_.resize(static_cast<std::size_t>(grid_.count()));
    for (std::size_t i = 0; i < n; ++i) {
      auto& p = gas.position[i];
      for (int a = 0; a < 2; ++a) p[a] -= box_[a] * std::floor(p[a] / box_[a]);
      std::array<int, 3> c{grid_.coord(p.x(), 0), grid_.coord(p.y(), 1), grid_.coord(p.z(), 2)};
      cell_[i] = c;
      insert(static_cast<int>(i));
    }
    heap_.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) predict(static_cast<int>(i));
  }

  /// Processes all events with time <= t, then synchronizes every particle to t.
  void advance_to(double t) {
    while (!heap_.empty() && heap_.front().t <= t) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      const Event e = heap_.back();
      heap_.pop_back();
      process(e);
    }
    now_ = t;
  }

  void synchronize() {
    for (std::size_t i = 0; i < gas_.size(); ++i) drift(static_cast<int>(i));
    gas_.time = now_;
  }

  Eigen::Vector3d position_at(int i, double t) const {
    return gas_.position[i] + gas_.velocity[i] * (t - local_time_[i]);
  }

  /// Tags untagged particles inside continuous sources at the current time.
  void refresh_sources() {
    for (const auto& src : options_.continuous_sources) {
      if (src.empty()) continue;
      for (std::size_t i = 0; i < gas_.size(); ++i) {
        if (gas_.tag[i] != 0) continue;
        if (src.contains(position_at(static_cast<int>(i), now_), box_)) gas_.tag[i] = src.channel;
      }
    }
  }

 private:
  enum Kind : int { kCollision = 0, kCross = 1, kWall = 2 };

  struct Event {
    double t;
    int i;
    int j;  // partner for collisions, axis for crossings
    int kind;
    std::uint64_t ci;
    std::uint64_t cj;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const { return a.t > b.t; }
  };

  void insert(int i) {
    auto& m = members_[cell_index(i)];
    slot_[i] = static_cast<int>(m.size());
    m.push_back(i);
  }
  void remove(int i) {
    auto& m = members_[cell_index(i)];
    const int last = m.back();
    m[slot_[i]] = last;
    slot_[last] = slot_[i];
    m.pop_back();
  }
  int cell_index(int i) const { return grid_.index(cell_[i][0], cell_[i][1], cell_[i][2]); }

  void drift(int i) {
    gas_.position[i] += gas_.velocity[i] * (now_ - local_time_[i]);
    local_time_[i] = now_;
  }

  bool mixed(int i, int j) const {
    return gas_.tag[i] != 0 && gas_.tag[j] != 0 && gas_.tag[i] != gas_.tag[j];
  }

  void push(const Event& e) {
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(), Later{});
  }

  void predict(int i) {
    drift(i);
    const Eigen::Vector3d& r = gas_.position[i];
    const Eigen::Vector3d& v = gas_.velocity[i];
    Event best{kInf, i, -1, kWall, counter_[i], 0};

    // z walls
    if (v.z() > 0) best.t = (box_.z() - radius_ - r.z()) / v.z();
    else if (v.z() < 0) best.t = (radius_ - r.z()) / v.z();
    best.t = std::max(best.t, 0.0);

    // cell faces
    for (int a = 0; a < 3; ++a) {
      if (v[a] == 0.0) continue;
      if (a == 2 && ((v[a] > 0 && cell_[i][2] == grid_.n[2] - 1) || (v[a] < 0 && cell_[i][2] == 0)))
        continue;
      const double lo = cell_[i][a] * grid_.width[a];
      const double face = v[a] > 0 ? lo + grid_.width[a] : lo;
      const double t = std::max((face - r[a]) / v[a], 0.0);
      if (t < best.t) best = {t, i, a, kCross, counter_[i], 0};
    }

    // pairs in the 27 surrounding cells
    const auto& c = cell_[i];
    for (int dz = -1; dz <= 1; ++dz) {
      const int z = c[2] + dz;
      if (z < 0 || z >= grid_.n[2]) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        const int y = (c[1] + dy + grid_.n[1]) % grid_.n[1];
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = (c[0] + dx + grid_.n[0]) % grid_.n[0];
          for (int j : members_[grid_.index(x, y, z)]) {
            if (j == i) continue;
            if (options_.mixed == MixedPolicy::pass_through && mixed(i, j)) continue;
            Eigen::Vector3d dr = position_at(j, now_) - r;
            dr.x() -= box_.x() * std::round(dr.x() / box_.x());
            dr.y() -= box_.y() * std::round(dr.y() / box_.y());
            const Eigen::Vector3d dv = gas_.velocity[j] - v;
            const double b = dr.dot(dv);
            if (b >= 0.0) continue;
            const double dv2 = dv.squaredNorm();
            const double disc = b * b - dv2 * (dr.squaredNorm() - d2_);
            if (disc <= 0.0) continue;
            const double t = std::max((-b - std::sqrt(disc)) / dv2, 0.0);
            if (t < best.t) best = {t, i, j, kCollision, counter_[i], counter_[j]};
          }
        }
      }
    }
    if (!std::isfinite(best.t)) {
      std::ostringstream msg;
      msg << "no future event for particle " << i << " at t = " << now_;
      throw NumericAbort(msg.str());
    }
    best.t += now_;
    push(best);
  }

  void process(const Event& e) {
    if (e.t < now_ - 1e-9) {
      std::ostringstream msg;
      msg << "event queue out of order: event at " << e.t << " after t = " << now_;
      throw NumericAbort(msg.str());
    }
    if (counter_[e.i] != e.ci) return;  // superseded
    now_ = std::max(now_, e.t);
    switch (e.kind) {
      case kCollision:
        if (counter_[e.j] != e.cj) {
          predict(e.i);
          return;
        }
        collide(e.i, e.j);
        return;
      case kCross:
        cross(e.i, e.j);
        return;
      case kWall:
        drift(e.i);
        gas_.velocity[e.i].z() = -gas_.velocity[e.i].z();
        ++counter_[e.i];
        ++history_.wall_hits;
        predict(e.i);
        return;
    }
  }

  void cross(int i, int axis) {
    drift(i);
    remove(i);
    auto& p = gas_.position[i];
    const double v = gas_.velocity[i][axis];
    int& c = cell_[i][axis];
    if (v > 0) {
      ++c;
      p[axis] = c * grid_.width[axis];
      if (c == grid_.n[axis]) {  // periodic wrap (x, y only)
        c = 0;
        p[axis] = 0.0;
      }
    } else {
      p[axis] = c * grid_.width[axis];
      --c;
      if (c < 0) {
        c = grid_.n[axis] - 1;
        p[axis] = box_[axis];
      }
    }
    insert(i);
    predict(i);
  }

  void collide(int i, int j) {
    drift(i);
    drift(j);
    if (options_.mixed == MixedPolicy::pass_through && mixed(i, j)) {
      ++counter_[i];
      ++counter_[j];
      predict(i);
      predict(j);
      return;
    }
    Eigen::Vector3d dr = gas_.position[j] - gas_.position[i];
    dr.x() -= box_.x() * std::round(dr.x() / box_.x());
    dr.y() -= box_.y() * std::round(dr.y() / box_.y());
    const Eigen::Vector3d n = dr.normalized();
    Eigen::Vector3d& vi = gas_.velocity[i];
    Eigen::Vector3d& vj = gas_.velocity[j];
    const double e0 = vi.squaredNorm() + vj.squaredNorm();
    const Eigen::Vector3d p0 = vi + vj;
    const double dvn = (vj - vi).dot(n);
    vi += dvn * n;
    vj -= dvn * n;
    const double e1 = vi.squaredNorm() + vj.squaredNorm();
    if (e0 > 0) history_.max_energy_error = std::max(history_.max_energy_error, std::abs(e1 - e0) / e0);
    const double pscale = std::sqrt(e0);
    if (pscale > 0)
      history_.max_momentum_error =
          std::max(history_.max_momentum_error, (vi + vj - p0).norm() / pscale);
    ++history_.collisions;

    if (options_.contagion) {
      int& ti = gas_.tag[i];
      int& tj = gas_.tag[j];
      if (ti == 0 && tj != 0) {
        ti = tj;
        ++history_.contagion_events;
      } else if (tj == 0 && ti != 0) {
        tj = ti;
        ++history_.contagion_events;
      }
    }
    ++counter_[i];
    ++counter_[j];
    predict(i);
    predict(j);
  }

  GasEnsemble& gas_;
  const RunOptions& options_;
  ContagionHistory& history_;
  Eigen::Vector3d box_;
  CellGrid grid_;
  double d2_;
  double radius_;
  double now_;
  std::vector<double> local_time_;
  std::vector<std::uint64_t> counter_;
  std::vector<std::array<int, 3>> cell_;
  std::vector<int> slot_;
  std::vector<std::vector<int>> members_;
  std::vector<Event> heap_;
};

ContagionSample take_sample(const EventEngine& engine, const GasEnsemble& gas, double t,
                            const ContagionHistory& history) {
  ContagionSample s;
  s.t = t;
  s.counts.assign(history.bin_centers.size(), {});
  const int nb = static_cast<int>(history.bin_centers.size());
  for (std::size_t i = 0; i < gas.size(); ++i) {
    const double z = engine.position_at(static_cast<int>(i), t).z();
    const int b = std::clamp(static_cast<int>(std::floor(z / history.bin_width)), 0, nb - 1);
    ++s.counts[b][gas.tag[i]];
    ++s.totals[gas.tag[i]];
  }
  return s;
}

}  // namespace

ContagionHistory run_contagion(GasEnsemble& ensemble, double duration,
                               const std::vector<double>& sample_times, const RunOptions& options) {
  if (!(duration >= 0)) throw ConfigError("run duration must be non-negative");
  if (!(options.bin_width > 0)) throw ConfigError("bin width must be positive");
  ContagionHistory history;
  history.bin_width = options.bin_width;
  history.box_z = ensemble.params.box.z();
  const int nb = static_cast<int>(std::ceil(history.box_z / options.bin_width - 1e-9));
  for (int b = 0; b < nb; ++b)
    history.bin_centers.push_back((b + 0.5) * options.bin_width);
  history.energy_start = ensemble.kinetic_energy();

  const double t0 = ensemble.time, t_end = t0 + duration;
  std::vector<double> samples;
  for (double t : sample_times)
    if (t >= t0 && t <= t_end) samples.push_back(t);
  std::sort(samples.begin(), samples.end());

  EventEngine engine(ensemble, options, history);
  const bool has_continuous = !options.continuous_sources.empty();
  double next_refresh = has_continuous ? t0 : kInf;
  std::size_t next_sample = 0;
  std::array<std::int64_t, kMaxChannels + 1> previous = ensemble.tag_counts();

  while (true) {
    const double ts = next_sample < samples.size() ? samples[next_sample] : kInf;
    const double t = std::min({ts, next_refresh, t_end});
    engine.advance_to(t);
    if (t == next_refresh) {
      engine.refresh_sources();
      next_refresh += options.source_refresh;
    }
    while (next_sample < samples.size() && samples[next_sample] == t) {
      ContagionSample s = take_sample(engine, ensemble, t, history);
      for (int mu = 1; mu <= kMaxChannels; ++mu)
        if (s.totals[mu] < previous[mu]) history.tags_monotone = false;
      previous = s.totals;
      history.samples.push_back(std::move(s));
      ++next_sample;
    }
    if (t >= t_end) break;
  }
  engine.synchronize();
  history.duration = duration;
  history.energy_end = ensemble.kinetic_energy();
  return history;
}

MeanFreePath measure_mean_free_path(GasEnsemble& ensemble, double duration) {
  RunOptions options;
  options.contagion = false;
  const ContagionHistory h = run_contagion(ensemble, duration, {}, options);
  MeanFreePath out;
  out.speed_scale = ensemble.speed_scale();
  if (h.collisions > 0) {
    out.mean_free_time =
        static_cast<double>(ensemble.size()) * duration / (2.0 * static_cast<double>(h.collisions));
    out.mean_free_path = out.speed_scale * out.mean_free_time;
  }
  return out;
}

}  // namespace intricacy::kmc
