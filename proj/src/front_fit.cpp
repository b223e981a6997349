#include "intricacy/front_fit.hpp"

#include <cmath>
#include <limits>

#include "intricacy/errors.hpp"

namespace intricacy::kmc {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  f.rms_residual = std::sqrt(ss_res / n);
  return f;
}

FrontFit fit_front_positions(const std::vector<double>& t, const std::vector<double>& half_width,
                             double fit_start) {
  FrontFit out;
  out.t = t;
  out.half_width = half_width;
  std::vector<double> ft, fz, st, lt, lz;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < fit_start || !std::isfinite(half_width[i])) continue;
    ft.push_back(t[i]);
    fz.push_back(half_width[i]);
    st.push_back(std::sqrt(t[i]));
    if (t[i] > 0 && half_width[i] > 0) {
      lt.push_back(std::log(t[i]));
      lz.push_back(std::log(half_width[i]));
    }
  }
  out.fitted_points = ft.size();
  if (ft.size() < 2) throw NumericAbort("front fit window holds fewer than two samples");
  const LineFit linear = fit_line(ft, fz);
  out.speed = linear.slope;
  out.r2 = linear.r2;
  out.linear_rms = linear.rms_residual;
  out.sqrt_rms = fit_line(st, fz).rms_residual;
  if (lt.size() >= 2) out.growth_exponent = fit_line(lt, lz).slope;
  return out;
}

FrontFit fit_front(const ContagionHistory& history, const FrontFitOptions& options) {
  const std::size_t nb = history.bin_centers.size();
  if (nb < 3) throw NumericAbort("too few bins to locate a front");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> t, left, right, half;
  bool truncated = false;
  for (const auto& s : history.samples) {
    double lo = nan, hi = nan;
    for (std::size_t b = 0; b < nb; ++b) {
      if (s.bin_total(b) == 0 || s.fraction(b, options.channel) < options.threshold) continue;
      if (std::isnan(lo)) lo = history.bin_centers[b];
      hi = history.bin_centers[b];
    }
    if (!std::isnan(lo) && (lo <= history.bin_centers[1] || hi >= history.bin_centers[nb - 2]))
      truncated = true;
    t.push_back(s.t);
    left.push_back(lo);
    right.push_back(hi);
    half.push_back(truncated || std::isnan(lo) ? nan : 0.5 * (hi - lo));
  }
  FrontFit out = fit_front_positions(t, half, options.fit_start);
  out.front_left = std::move(left);
  out.front_right = std::move(right);
  out.truncated = truncated;
  return out;
}

}  // namespace intricacy::kmc
