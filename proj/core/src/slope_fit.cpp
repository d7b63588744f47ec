#include "adiaband/slope_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adiaband {

SlopeFit fit_slope(std::span<const double> h, std::span<const double> defect, double floor) {
  if (h.size() != defect.size()) throw std::invalid_argument("fit_slope: length mismatch");
  SlopeFit f;
  f.h.assign(h.begin(), h.end());
  f.defect.assign(defect.begin(), defect.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) throw std::invalid_argument("fit_slope: h must be positive");
    const bool sat = !(defect[i] > floor);
    f.saturated.push_back(sat);
    if (sat) continue;
    const double x = std::log(h[i]), y = std::log(defect[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++f.used;
  }
  f.all_saturated = f.used == 0 && !h.empty();
  if (f.used >= 2) {
    const double n = f.used;
    const double den = n * sxx - sx * sx;
    if (den > 0.0) {
      f.slope = (n * sxy - sx * sy) / den;
      f.intercept = (sy - f.slope * sx) / n;
      f.valid = true;
      double ss_res = 0.0, ss_tot = 0.0;
      const double mean = sy / n;
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (f.saturated[i]) continue;
        const double y = std::log(defect[i]);
        const double r = y - (f.intercept + f.slope * std::log(h[i]));
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
      }
      f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
  }
  return f;
}

void require_sweep(std::span<const double> h, double decades, const std::string& where) {
  if (h.size() < 5) throw std::invalid_argument(where + ": need at least 5 h values");
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  if (!(*lo > 0.0)) throw std::invalid_argument(where + ": h values must be positive");
  if (std::log10(*hi / *lo) < decades - 1e-9)
    throw std::invalid_argument(where + ": h values must span at least " +
                                std::to_string(decades) + " decades");
}

bool slope_at_least(const SlopeFit& fit, double threshold) {
  if (fit.all_saturated) return true;
  return fit.valid && fit.slope >= threshold;
}

}  // namespace adiaband
