#include <doctest.h>

#include <cmath>

#include "intricacy/errors.hpp"
#include "intricacy/field_kinetics.hpp"
#include "intricacy/front_profile.hpp"
#include "intricacy/harness/config.hpp"
#include "intricacy/harness/experiments.hpp"

using namespace intricacy;

TEST_CASE("tail exponent is the positive characteristic root") {
  const double q = front::tail_exponent();
  CHECK(q == doctest::Approx(3.0 - std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(front::characteristic_residual(q)) < 1e-12);
  // The other root is negative and unbounded in the tail.
  CHECK(std::abs(front::characteristic_residual(-3.0 - std::sqrt(3.0))) < 1e-12);
  CHECK(q > 0);
}

TEST_CASE("C = 0.05 profile") {
  const auto p = front::integrate_front(0.05);
  CHECK(p.x.back() == 0.0);
  CHECK(std::abs(p.g.back()) < 1e-9);
  for (std::size_t i = 1; i < p.g.size(); ++i) CHECK(p.g[i] <= p.g[i - 1]);
  CHECK(p.g_prime_at_front < 0.0);
  CHECK(p.g_prime_at_front == doctest::Approx(-0.06).epsilon(0.5));
  const double depth = front::depth_reaching(p, 0.99);
  CHECK(depth > 0.0);
  CHECK(depth <= 8.0);
  CHECK(front::ode_residual(p) < 1e-6);
  CHECK(front::tail_slope(p) == doctest::Approx(p.q).epsilon(0.01));
}

TEST_CASE("profiles for different C overlay behind the front") {
  const auto a = front::integrate_front(0.05);
  const auto b = front::integrate_front(0.01);
  const double deepest = std::max(a.x.front(), b.x.front());
  double err = 0.0;
  for (double x = deepest; x <= 0.0; x += 0.01) err = std::max(err, std::abs(front::sample(a, x) - front::sample(b, x)));
  CHECK(err < 1e-3);
}

TEST_CASE("invalid options") {
  CHECK_THROWS_AS(front::integrate_front(0.0), ConfigError);
  CHECK_THROWS_AS(front::integrate_front(0.3), ConfigError);
  front::FrontOptions o;
  // C e^{-q x0} above 0.1: the tail is not yet linear there.
  o.x0 = 0.5;
  o.C = 0.2;
  CHECK_THROWS_AS(front::integrate_front(o), ConfigError);
  o = {};
  o.max_span = 1.0;
  CHECK_THROWS_AS(front::integrate_front(o), NumericAbort);
}

TEST_CASE("constrained PDE profile matches the front ODE") {
  harness::PdeSection pde;
  pde.free_enabled = false;
  pde.multichannel_enabled = false;
  const auto run = harness::run_constrained_front(pde);
  const auto& last = run.history.snapshots.back();
  const double edge = pde.source_z + pde.constraint_speed * last.t;
  const auto p = front::integrate_front(0.05);
  double err = 0.0;
  for (Eigen::Index i = 0; i < last.f1.size(); ++i) {
    const double x = run.history.z[i] - edge;
    if (x > 0.0 || x < p.x.front()) continue;
    err = std::max(err, std::abs(last.f1[i] - front::sample(p, x)));
  }
  CHECK(err < 0.02);
  CHECK(run.interior_min >= 0.99);
}
