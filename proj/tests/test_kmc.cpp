#include <doctest.h>

#include <cmath>

#include "intricacy/errors.hpp"
#include "intricacy/front_fit.hpp"
#include "intricacy/gas.hpp"

using namespace intricacy;
using namespace intricacy::kmc;

namespace {

// Same density as the default run in a smaller box.
GasParams small_gas(std::int64_t n = 20000, std::uint64_t seed = 7) {
  GasParams p;
  p.n_particles = n;
  const double volume = n / (100000.0 / (20.0 * 20.0 * 60.0));
  p.box = {16.0, 16.0, volume / 256.0};
  p.seed = seed;
  return p;
}

// Two spheres flying at each other along z, first one tagged.
GasEnsemble head_on(int tag_a, int tag_b) {
  GasEnsemble g;
  g.params.n_particles = 2;
  g.params.box = {10.0, 10.0, 10.0};
  g.params.cell_size = 1.0;
  g.diameter = 0.5;
  g.position = {{5.0, 5.0, 3.0}, {5.0, 5.0, 7.0}};
  g.velocity = {{0.0, 0.0, 1.0}, {0.1, 0.0, -0.7}};
  g.tag = {tag_a, tag_b};
  return g;
}

SourceSpec plane(double z, double thickness, int channel = 1) {
  SourceSpec s;
  s.plane_z = z;
  s.thickness = thickness;
  s.channel = channel;
  return s;
}

}  // namespace

TEST_CASE("Maxwell-Boltzmann sampling gives the unit speed scale") {
  const auto gas = init_gas(small_gas());
  CHECK(gas.size() == 20000);
  CHECK(gas.speed_scale() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gas.momentum().norm() < 1e-9 * gas.size());
  for (const auto& t : gas.tag) CHECK(t == 0);
  const double d2 = gas.diameter * gas.diameter;
  // Spot-check non-overlap on a slice of pairs.
  for (std::size_t i = 0; i < 200; ++i)
    for (std::size_t j = i + 1; j < 200; ++j) {
      Eigen::Vector3d r = gas.position[i] - gas.position[j];
      for (int a = 0; a < 2; ++a) r[a] -= gas.params.box[a] * std::round(r[a] / gas.params.box[a]);
      CHECK(r.squaredNorm() >= d2);
    }
}

TEST_CASE("zero particles is rejected") {
  GasParams p = small_gas();
  p.n_particles = 0;
  CHECK_THROWS_AS(init_gas(p), ConfigError);
}

TEST_CASE("mean free path calibrates to one") {
  auto gas = init_gas(small_gas());
  const auto mfp = measure_mean_free_path(gas, 3.0);
  CHECK(mfp.mean_free_path == doctest::Approx(1.0).epsilon(0.1));
  CHECK(mfp.mean_free_time == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("plane source tags only the slab") {
  auto gas = init_gas(small_gas(5000));
  const double z0 = 0.5 * gas.params.box.z();
  const auto tagged = inject_source(gas, plane(z0, 1.0));
  CHECK(tagged > 0);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < gas.size(); ++i) {
    const bool inside = std::abs(gas.position[i].z() - z0) <= 0.5;
    CHECK((gas.tag[i] == 1) == inside);
    count += gas.tag[i] == 1;
  }
  CHECK(count == tagged);
  CHECK(inject_source(gas, plane(z0 - 3.0, 0.0)) == 0);
}

TEST_CASE("two plane sources give disjoint channels") {
  auto gas = init_gas(small_gas(5000));
  const double z = gas.params.box.z();
  const auto a = inject_source(gas, plane(0.25 * z, 1.0, 1));
  const auto b = inject_source(gas, plane(0.75 * z, 1.0, 2));
  const auto counts = gas.tag_counts();
  CHECK(counts[1] == a);
  CHECK(counts[2] == b);
  CHECK(counts[0] + counts[1] + counts[2] == 5000);
}

TEST_CASE("head-on collision spreads the tag and keeps the energy") {
  auto g = head_on(1, 0);
  const double e0 = g.kinetic_energy();
  const Eigen::Vector3d p0 = g.momentum();
  const auto h = run_contagion(g, 6.0, {0.0, 6.0});
  CHECK(h.collisions >= 1);
  CHECK(g.tag[0] == 1);
  CHECK(g.tag[1] == 1);
  CHECK(std::abs(g.kinetic_energy() - e0) <= 1e-12 * e0);
  CHECK((g.momentum() - p0).norm() < 1e-12);
}

TEST_CASE("mixed channels scatter without changing tags") {
  auto g = head_on(1, 2);
  const Eigen::Vector3d v0 = g.velocity[0];
  const auto h = run_contagion(g, 6.0, {6.0});
  CHECK(h.collisions >= 1);
  CHECK(h.contagion_events == 0);
  CHECK(g.tag[0] == 1);
  CHECK(g.tag[1] == 2);
  CHECK((g.velocity[0] - v0).norm() > 0.1);

  auto pass = head_on(1, 2);
  RunOptions through;
  through.mixed = MixedPolicy::pass_through;
  const auto h2 = run_contagion(pass, 6.0, {6.0}, through);
  CHECK(h2.collisions == 0);
  CHECK((pass.velocity[0] - v0).norm() == 0.0);
}

TEST_CASE("untagged and fully tagged gases stay that way") {
  auto gas = init_gas(small_gas(3000));
  std::vector<double> times{0.0, 1.0, 2.0};
  auto h = run_contagion(gas, 2.0, times);
  for (const auto& s : h.samples)
    for (std::size_t b = 0; b < h.bin_centers.size(); ++b) CHECK(s.fraction(b, 1) == 0.0);

  for (auto& t : gas.tag) t = 1;
  h = run_contagion(gas, 2.0, {2.0, 3.0, 4.0});
  for (const auto& s : h.samples)
    for (std::size_t b = 0; b < h.bin_centers.size(); ++b)
      if (s.bin_total(b) > 0) CHECK(s.fraction(b, 1) == 1.0);
}

TEST_CASE("contagion run keeps invariants; control conserves tags") {
  auto gas = init_gas(small_gas(20000));
  inject_source(gas, plane(0.5 * gas.params.box.z(), 1.0));
  auto control = gas;
  std::vector<double> times;
  for (int i = 0; i <= 6; ++i) times.push_back(i);

  const auto h = run_contagion(gas, 6.0, times);
  CHECK(h.tags_monotone);
  CHECK(h.max_energy_error < 1e-10);
  CHECK(h.max_momentum_error < 1e-10);
  CHECK(std::abs(h.energy_end - h.energy_start) <= 1e-10 * h.energy_start);
  CHECK(h.samples.back().totals[1] > h.samples.front().totals[1]);
  for (const auto& s : h.samples)
    for (std::size_t b = 0; b < h.bin_centers.size(); ++b)
      if (s.bin_total(b) > 0)
        CHECK(s.fraction(b, 0) + s.fraction(b, 1) + s.fraction(b, 2) == doctest::Approx(1.0));

  RunOptions off;
  off.contagion = false;
  const auto c = run_contagion(control, 6.0, times, off);
  CHECK(c.contagion_events == 0);
  for (const auto& s : c.samples) CHECK(s.totals[1] == c.samples.front().totals[1]);
}

TEST_CASE("runs are reproducible for a fixed seed") {
  auto a = init_gas(small_gas(3000, 99));
  auto b = init_gas(small_gas(3000, 99));
  inject_source(a, plane(5.0, 1.0));
  inject_source(b, plane(5.0, 1.0));
  const auto ha = run_contagion(a, 2.0, {2.0});
  const auto hb = run_contagion(b, 2.0, {2.0});
  CHECK(ha.collisions == hb.collisions);
  CHECK(a.tag == b.tag);
  CHECK(a.position[17] == b.position[17]);
}

TEST_CASE("line fit recovers a line") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_line({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("synthetic front at 0.6 t") {
  std::vector<double> t, w;
  for (int i = 0; i <= 25; ++i) {
    t.push_back(i);
    w.push_back(0.6 * i);
  }
  const auto f = fit_front_positions(t, w, 5.0);
  CHECK(f.speed == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(f.linear_rms < 1e-12);
  CHECK(f.growth_exponent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.sqrt_rms > f.linear_rms);

  std::vector<double> diffusive;
  for (double ti : t) diffusive.push_back(std::sqrt(ti));
  CHECK(fit_front_positions(t, diffusive, 5.0).growth_exponent == doctest::Approx(0.5).epsilon(1e-9));
}
