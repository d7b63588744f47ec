#pragma once

#include <span>
#include <string>
#include <vector>

namespace adiaband {

// Least-squares line through (log h, log defect). Points whose defect is at
// or below `floor` are marked saturated and left out of the fit.
struct SlopeFit {
  std::vector<double> h;
  std::vector<double> defect;
  std::vector<bool> saturated;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int used = 0;
  bool valid = false;  // at least two unsaturated points
  bool all_saturated = false;
};

SlopeFit fit_slope(std::span<const double> h, std::span<const double> defect,
                   double floor = 1e-13);

// Checks the sampling requirements (>= 5 points, span >= `decades`).
void require_sweep(std::span<const double> h, double decades, const std::string& where);

// Passes when the fit is valid and its slope reaches `threshold`, or when
// every point is saturated (defect below the numerical floor).
bool slope_at_least(const SlopeFit& fit, double threshold);

}  // namespace adiaband
