// Travelling-wave profile behind a front moving at v' = 3^{-1/2}:
//
//   -v' g' = g (1 - g) + g'' / 6,   g(-inf) = 1,  g(0) = 0.
//
// The profile is shot forward from the linear tail g = 1 - C e^{q x}.
#pragma once

#include <optional>
#include <vector>

namespace intricacy::front {

/// Positive root of q^2 + 2 sqrt(3) q - 6 = 0, i.e. 3 - sqrt(3).
double tail_exponent();

/// q^2 / 6 + q / sqrt(3) - 1 evaluated at q.
double characteristic_residual(double q);

struct FrontOptions {
  double C = 0.05;
  /// Start depth; empty picks C e^{-q x0} = 1e-4.
  std::optional<double> x0;
  double dx = 1e-3;
  double rtol = 1e-12;
  double atol = 1e-14;
  /// Give up if no crossing appears before x = max_span (start at -x0).
  double max_span = 50.0;
};

struct FrontProfile {
  /// Ascending, x.back() == 0. x[1..] are equally spaced by dx; x[0] is the
  /// start point and may sit closer to x[1].
  std::vector<double> x;
  std::vector<double> g;
  std::vector<double> dg;
  double C = 0.0;
  double q = 0.0;
  double x0 = 0.0;
  double dx = 0.0;
  double g_prime_at_front = 0.0;
};

double default_start_depth(double C);

FrontProfile integrate_front(const FrontOptions& options = {});

inline FrontProfile integrate_front(double C) {
  FrontOptions o;
  o.C = C;
  return integrate_front(o);
}

/// max |-v' g' - g(1-g) - g''/6| over the equally spaced interior nodes,
/// derivatives from central differences.
double ode_residual(const FrontProfile& p);

/// Slope of log(1 - g) against x over the deepest third of the profile.
double tail_slope(const FrontProfile& p);

/// Distance behind the front (x <= 0) at which g first stays above level.
double depth_reaching(const FrontProfile& p, double level);

/// Linear interpolation of g at x (x inside the profile range).
double sample(const FrontProfile& p, double x);

}  // namespace intricacy::front
