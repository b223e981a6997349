#pragma once

#include <vector>

#include "intricacy/gas.hpp"

namespace intricacy::kmc {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  /// Root-mean-square residual of the fit.
  double rms_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct FrontFitOptions {
  double threshold = 0.05;
  /// Start of the ballistic fit window (in mean free times).
  double fit_start = 5.0;
  int channel = 1;
};

struct FrontFit {
  std::vector<double> t;
  std::vector<double> front_left;
  std::vector<double> front_right;
  /// Half the distance between the outermost bins above threshold.
  std::vector<double> half_width;
  double speed = 0.0;
  double r2 = 0.0;
  double linear_rms = 0.0;
  /// Residual of the alternative half_width = a + b sqrt(t) model.
  double sqrt_rms = 0.0;
  /// Fitted exponent alpha in half_width ~ t^alpha over the fit window.
  double growth_exponent = 0.0;
  /// The front reached a wall; samples after that are excluded from fits.
  bool truncated = false;
  std::size_t fitted_points = 0;
};

/// Front positions per sample and a least-squares speed over t >= fit_start.
FrontFit fit_front(const ContagionHistory& history, const FrontFitOptions& options = {});

/// Same fits applied to an explicit half-width series.
FrontFit fit_front_positions(const std::vector<double>& t, const std::vector<double>& half_width,
                             double fit_start);

}  // namespace intricacy::kmc
