#pragma once

#include <span>
#include <vector>

namespace adiaband {

// Fornberg weights: w[s] such that sum_s w[s] f(nodes[s]) approximates
// f^(order)(x0). Exact for polynomials of degree < nodes.size().
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order);

// Number of stencil points for derivative order d at the given accuracy.
int stencil_points(int derivative_order, int accuracy);

// Derivative operator along one axis of n uniformly spaced unit-step nodes.
// Periodic axes wrap a central stencil; clamped axes shift the window
// inward near the ends so every row stays inside the axis.
class Stencil1D {
 public:
  Stencil1D(int n, int derivative_order, int accuracy, bool periodic);

  int size() const { return n_; }
  int points() const { return points_; }
  int derivative_order() const { return order_; }
  bool periodic() const { return periodic_; }
  int reach() const { return (points_ - 1) / 2; }

  // Start index of row i (may be negative for periodic axes; wrap it).
  int start(int i) const;
  const std::vector<double>& weights(int i) const;

 private:
  int n_;
  int order_;
  int points_;
  bool periodic_;
  std::vector<std::vector<double>> patterns_;
  std::vector<int> row_pattern_;
  std::vector<int> row_start_;
};

// Shared, thread-safe cache of stencils keyed by (n, order, accuracy, periodic).
const Stencil1D& cached_stencil(int n, int derivative_order, int accuracy, bool periodic);

}  // namespace adiaband
