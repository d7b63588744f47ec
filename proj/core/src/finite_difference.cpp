#include "adiaband/finite_difference.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace adiaband {

std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (order < 0) throw std::invalid_argument("fornberg_weights: negative order");
  if (n <= order) throw std::invalid_argument("fornberg_weights: too few nodes for order");
  const int m = order;
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int s = 0; s < n; ++s) w[s] = c[s][m];
  return w;
}

int stencil_points(int derivative_order, int accuracy) {
  if (derivative_order < 0) throw std::invalid_argument("stencil_points: negative order");
  if (derivative_order == 0) return 1;
  return 2 * ((derivative_order + 1) / 2) - 1 + accuracy;
}

Stencil1D::Stencil1D(int n, int derivative_order, int accuracy, bool periodic)
    : n_(n), order_(derivative_order), points_(stencil_points(derivative_order, accuracy)),
      periodic_(periodic) {
  if (n < 1) throw std::invalid_argument("Stencil1D: empty axis");
  if (derivative_order > 12) throw std::invalid_argument("Stencil1D: derivative order above 12");
  if (points_ > n)
    throw std::invalid_argument("Stencil1D: stencil of " + std::to_string(points_) +
                                " points exceeds axis of " + std::to_string(n) + " nodes");
  const int r = reach();
  row_pattern_.resize(n);
  row_start_.resize(n);
  std::map<int, int> by_offset;  // position of the target inside the window -> pattern
  std::vector<double> pos(points_);
  for (int i = 0; i < n; ++i) {
    int start = i - r;
    if (!periodic) start = std::clamp(start, 0, n - points_);
    const int local = i - start;
    auto it = by_offset.find(local);
    if (it == by_offset.end()) {
      for (int s = 0; s < points_; ++s) pos[s] = static_cast<double>(s);
      patterns_.push_back(fornberg_weights(static_cast<double>(local), pos, derivative_order));
      it = by_offset.emplace(local, static_cast<int>(patterns_.size()) - 1).first;
    }
    row_pattern_[i] = it->second;
    row_start_[i] = start;
  }
}

int Stencil1D::start(int i) const { return row_start_[i]; }

const std::vector<double>& Stencil1D::weights(int i) const { return patterns_[row_pattern_[i]]; }

const Stencil1D& cached_stencil(int n, int derivative_order, int accuracy, bool periodic) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int, bool>, std::unique_ptr<Stencil1D>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(n, derivative_order, accuracy, periodic);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(key, std::make_unique<Stencil1D>(n, derivative_order, accuracy, periodic))
             .first;
  return *it->second;
}

}  // namespace adiaband
