#pragma once

#include <cstddef>

namespace adiaband {

enum class Boundary { periodic, clamped };

// Uniform rectangular grid on a bounded region of phase space (x, xi).
// Nodes are x_i = x_min + i*dx, i < n_x (same for xi), stored x-major.
// In clamped mode derivatives use one-sided stencils near the edges and
// norms skip `margin_cells` cells on every side.
struct PhaseSpaceGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  double xi_min = 0.0;
  double xi_max = 1.0;
  int n_x = 1;
  int n_xi = 1;
  Boundary boundary = Boundary::periodic;
  int margin_cells = 0;
  int fd_order = 4;  // accuracy order of the finite-difference stencils

  static PhaseSpaceGrid periodic(double x_min, double x_max, double xi_min, double xi_max,
                                 int n_x, int n_xi, int fd_order = 4);
  static PhaseSpaceGrid clamped(double x_min, double x_max, double xi_min, double xi_max,
                                int n_x, int n_xi, int margin_cells, int fd_order = 4);

  void validate() const;

  double dx() const { return (x_max - x_min) / n_x; }
  double dxi() const { return (xi_max - xi_min) / n_xi; }
  double x(int i) const { return x_min + i * dx(); }
  double xi(int j) const { return xi_min + j * dxi(); }
  std::size_t nodes() const { return static_cast<std::size_t>(n_x) * n_xi; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_xi + j; }
  int ix(std::size_t k) const { return static_cast<int>(k / n_xi); }
  int ixi(std::size_t k) const { return static_cast<int>(k % n_xi); }

  bool is_interior(int i, int j) const;

  friend bool operator==(const PhaseSpaceGrid&, const PhaseSpaceGrid&) = default;
};

}  // namespace adiaband
