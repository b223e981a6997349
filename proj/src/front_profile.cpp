#include "intricacy/front_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "intricacy/errors.hpp"

namespace intricacy::front {

namespace {

using State = std::array<double, 2>;  // (g, g')

const double kFrontSpeed = 1.0 / std::sqrt(3.0);

State rhs(const State& y) {
  const double g = y[0], dg = y[1];
  return {dg, 6.0 * (-kFrontSpeed * dg - g * (1.0 - g))};
}

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

// Dormand-Prince 5(4) with error control.
class Dopri5 {
 public:
  Dopri5(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  // Advance y from x to x_end exactly.
  void advance(State& y, double& x, double x_end) {
    if (x_end <= x) return;
    if (h_ <= 0) h_ = std::min(1e-3, x_end - x);
    while (x < x_end) {
      const bool last = x + h_ >= x_end;
      const double h = last ? x_end - x : h_;
      State y5;
      const double err = trial(y, h, y5);
      if (err <= 1.0) {
        y = y5;
        x = last ? x_end : x + h;
      }
      const double factor = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      const double next = h * factor;
      if (!last || err > 1.0) h_ = next;
      if (h_ < 1e-14) throw NumericAbort("front integrator step size underflow");
    }
  }

 private:
  double trial(const State& y, double h, State& y5) const {
    const State k1 = rhs(y);
    const State k2 = rhs(axpy(y, h, {{1.0 / 5, &k1}}));
    const State k3 = rhs(axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const State k4 = rhs(axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const State k5 = rhs(axpy(y, h,
                              {{19372.0 / 6561, &k1},
                               {-25360.0 / 2187, &k2},
                               {64448.0 / 6561, &k3},
                               {-212.0 / 729, &k4}}));
    const State k6 = rhs(axpy(y, h,
                              {{9017.0 / 3168, &k1},
                               {-355.0 / 33, &k2},
                               {46732.0 / 5247, &k3},
                               {49.0 / 176, &k4},
                               {-5103.0 / 18656, &k5}}));
    y5 = axpy(y, h,
              {{35.0 / 384, &k1},
               {500.0 / 1113, &k3},
               {125.0 / 192, &k4},
               {-2187.0 / 6784, &k5},
               {11.0 / 84, &k6}});
    const State k7 = rhs(y5);
    const State y4 = axpy(y, h,
                          {{5179.0 / 57600, &k1},
                           {7571.0 / 16695, &k3},
                           {393.0 / 640, &k4},
                           {-92097.0 / 339200, &k5},
                           {187.0 / 2100, &k6},
                           {1.0 / 40, &k7}});
    double err = 0;
    for (int i = 0; i < 2; ++i) {
      const double scale = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
    }
    return err;
  }

  double rtol_, atol_;
  double h_ = 0.0;
};

// Root of the cubic Hermite interpolant of g on [xa, xb], by bisection.
double hermite_root(double xa, const State& a, double xb, const State& b) {
  const double h = xb - xa;
  auto g = [&](double x) {
    const double s = (x - xa) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * a[0] + h10 * h * a[1] + h01 * b[0] + h11 * h * b[1];
  };
  double lo = xa, hi = xb;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double tail_exponent() {
  // Larger root of q^2 + 2 sqrt(3) q - 6, written to avoid cancellation.
  const double b = 2.0 * std::sqrt(3.0);
  return 12.0 / (b + std::sqrt(b * b + 24.0));
}

double characteristic_residual(double q) { return q * q / 6.0 + q / std::sqrt(3.0) - 1.0; }

double default_start_depth(double C) { return std::log(C / 1e-4) / tail_exponent(); }

FrontProfile integrate_front(const FrontOptions& o) {
  if (!(o.C > 0.0 && o.C <= 0.2)) throw ConfigError("tail amplitude C must lie in (0, 0.2]");
  if (!(o.dx > 0.0)) throw ConfigError("front dx must be positive");
  const double q = tail_exponent();
  const double x0 = o.x0 ? *o.x0 : default_start_depth(o.C);
  if (!(x0 > 0.0)) throw ConfigError("front start depth x0 must be positive");
  const double u0 = o.C * std::exp(-q * x0);
  if (u0 > 0.1) throw ConfigError("C exp(-q x0) must not exceed 0.1; increase x0");
  const State start{1.0 - u0, -q * u0};

  // Pass 1: march on a uniform grid until g changes sign.
  Dopri5 pass1(o.rtol, o.atol);
  State y = start, prev = start;
  double x = -x0, x_prev = -x0;
  const double limit = o.max_span;
  double crossing = 0.0;
  bool found = false;
  for (long k = 1; !found; ++k) {
    const double target = -x0 + static_cast<double>(k) * o.dx;
    if (target > limit) {
      std::ostringstream msg;
      msg << "no g = 0 crossing within " << o.max_span << " mean free paths of the start (C = "
          << o.C << ", x0 = " << x0 << ")";
      throw NumericAbort(msg.str());
    }
    prev = y;
    x_prev = x;
    pass1.advance(y, x, target);
    if (y[0] <= 0.0) {
      crossing = hermite_root(x_prev, prev, x, y);
      found = true;
    }
  }

  // Pass 2: re-integrate onto nodes anchored at the crossing.
  FrontProfile p;
  p.C = o.C;
  p.q = q;
  p.x0 = x0;
  p.dx = o.dx;
  const double depth = crossing + x0;
  const auto n = static_cast<long>(std::floor(depth / o.dx + 1e-9));
  std::vector<double> nodes;
  nodes.reserve(n + 2);
  for (long k = n; k >= 0; --k) nodes.push_back(crossing - static_cast<double>(k) * o.dx);
  Dopri5 pass2(o.rtol, o.atol);
  y = start;
  x = -x0;
  p.x.push_back(-x0 - crossing);
  p.g.push_back(y[0]);
  p.dg.push_back(y[1]);
  for (const double node : nodes) {
    if (node <= x) continue;
    pass2.advance(y, x, node);
    p.x.push_back(node - crossing);
    p.g.push_back(y[0]);
    p.dg.push_back(y[1]);
  }
  p.x.back() = 0.0;
  p.g_prime_at_front = p.dg.back();
  return p;
}

double ode_residual(const FrontProfile& p) {
  double worst = 0.0;
  const double h = p.dx;
  for (std::size_t i = 2; i + 1 < p.x.size(); ++i) {
    const double d1 = (p.g[i + 1] - p.g[i - 1]) / (2 * h);
    const double d2 = (p.g[i + 1] - 2 * p.g[i] + p.g[i - 1]) / (h * h);
    const double r = -kFrontSpeed * d1 - p.g[i] * (1 - p.g[i]) - d2 / 6.0;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double tail_slope(const FrontProfile& p) {
  const double cut = p.x.front() + (p.x.back() - p.x.front()) / 3.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t i = 0; i < p.x.size() && p.x[i] <= cut; ++i) {
    const double ly = std::log(1.0 - p.g[i]);
    sx += p.x[i];
    sy += ly;
    sxx += p.x[i] * p.x[i];
    sxy += p.x[i] * ly;
    n += 1;
  }
  if (n < 2) throw NumericAbort("profile too short for a tail fit");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double depth_reaching(const FrontProfile& p, double level) {
  // Scan from the front backwards to the first node at or above level.
  for (std::size_t i = p.x.size(); i-- > 0;)
    if (p.g[i] >= level) return -p.x[i];
  throw NumericAbort("profile never reaches the requested level");
}

double sample(const FrontProfile& p, double x) {
  if (x < p.x.front() || x > p.x.back()) throw std::out_of_range("x outside the profile");
  const auto it = std::lower_bound(p.x.begin(), p.x.end(), x);
  const auto i = static_cast<std::size_t>(it - p.x.begin());
  if (i == 0) return p.g.front();
  const double w = (x - p.x[i - 1]) / (p.x[i] - p.x[i - 1]);
  return (1 - w) * p.g[i - 1] + w * p.g[i];
}

}  // namespace intricacy::front
