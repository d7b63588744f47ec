#include "adiaband/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace adiaband {

PhaseSpaceGrid PhaseSpaceGrid::periodic(double x_min, double x_max, double xi_min, double xi_max,
                                        int n_x, int n_xi, int fd_order) {
  PhaseSpaceGrid g{x_min, x_max, xi_min, xi_max, n_x, n_xi, Boundary::periodic, 0, fd_order};
  g.validate();
  return g;
}

PhaseSpaceGrid PhaseSpaceGrid::clamped(double x_min, double x_max, double xi_min, double xi_max,
                                       int n_x, int n_xi, int margin_cells, int fd_order) {
  PhaseSpaceGrid g{x_min, x_max, xi_min, xi_max, n_x, n_xi, Boundary::clamped, margin_cells,
                   fd_order};
  g.validate();
  return g;
}

void PhaseSpaceGrid::validate() const {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(xi_min) &&
        std::isfinite(xi_max)))
    throw std::invalid_argument("grid: bounds must be finite");
  if (!(x_max > x_min) || !(xi_max > xi_min))
    throw std::invalid_argument("grid: empty region");
  if (n_x < 8 || n_xi < 8) throw std::invalid_argument("grid: need at least 8 nodes per axis");
  if (margin_cells < 0) throw std::invalid_argument("grid: negative margin");
  if (boundary == Boundary::clamped && (2 * margin_cells >= n_x || 2 * margin_cells >= n_xi))
    throw std::invalid_argument("grid: margin leaves no interior");
  if (fd_order < 2 || fd_order % 2 != 0 || fd_order > 16)
    throw std::invalid_argument("grid: fd_order must be even and in [2,16]");
}

bool PhaseSpaceGrid::is_interior(int i, int j) const {
  if (boundary == Boundary::periodic) return true;
  return i >= margin_cells && i < n_x - margin_cells && j >= margin_cells &&
         j < n_xi - margin_cells;
}

}  // namespace adiaband
