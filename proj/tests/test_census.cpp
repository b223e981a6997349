#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "intricacy/census.hpp"
#include "intricacy/errors.hpp"

using namespace intricacy::census;

TEST_CASE("argon at standard conditions") {
  const auto r = wave_census({});
  CHECK(r.active_waves == doctest::Approx(1.89e16).epsilon(1e-3));
  CHECK(r.active_waves > 2e15);
  CHECK(r.active_waves < 5e16);
  CHECK(r.rate_tau_d_inv == doctest::Approx(2.7e25 * 380.0 * 0.01));
  CHECK(r.waves_in_box == doctest::Approx(2.7e25 * (380.0 / 319.0) * 1e-3));
}

TEST_CASE("degenerate inputs are rejected") {
  CensusInputs in;
  in.n_e = 0.0;
  CHECK_THROWS_AS(wave_census(in), intricacy::ConfigError);
  in = {};
  in.lambda_mfp = -1.0;
  CHECK_THROWS_AS(wave_census(in), intricacy::ConfigError);
  in = {};
  in.v_prime = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(wave_census(in), intricacy::ConfigError);
}

TEST_CASE("doubling L") {
  CensusInputs in;
  const auto a = wave_census(in);
  in.L *= 2.0;
  const auto b = wave_census(in);
  CHECK(b.rate_tau_d_inv / a.rate_tau_d_inv == doctest::Approx(4.0));
  CHECK(b.waves_in_box / a.waves_in_box == doctest::Approx(8.0));
  CHECK(b.active_waves / a.active_waves == doctest::Approx(4.0));
}

TEST_CASE("power-law scaling and dimensional consistency over random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    CensusInputs in{2.7e25 * u(rng), 380.0 * u(rng), 319.0 * u(rng), 0.1 * u(rng), 7e-8 * u(rng)};
    const auto r = wave_census(in);
    CHECK(r.waves_in_box / r.active_waves ==
          doctest::Approx((in.v_e / in.v_prime) * in.L / in.lambda_mfp).epsilon(1e-12));
    const double s = u(rng);
    CensusInputs scaled = in;
    scaled.n_e *= s;
    const auto rs = wave_census(scaled);
    CHECK(rs.rate_tau_d_inv / r.rate_tau_d_inv == doctest::Approx(s).epsilon(1e-12));
    CHECK(rs.active_waves / r.active_waves == doctest::Approx(s).epsilon(1e-12));
    scaled = in;
    scaled.lambda_mfp *= s;
    CHECK(wave_census(scaled).active_waves / r.active_waves == doctest::Approx(s).epsilon(1e-12));
    scaled = in;
    scaled.v_prime *= s;
    CHECK(wave_census(scaled).waves_in_box / r.waves_in_box == doctest::Approx(1.0 / s).epsilon(1e-12));
  }
}
