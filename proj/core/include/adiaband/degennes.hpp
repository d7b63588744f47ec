#pragma once

#include <limits>
#include <vector>

namespace adiaband {

// Dirichlet sentinel for the Robin parameter.
inline constexpr double kDirichlet = std::numeric_limits<double>::infinity();

// -d^2/dt^2 + (t - sigma)^2 on [0, t_max] with u'(0) = gamma u(0)
// (u(0) = 0 when gamma is infinite) and u(t_max) = 0.
struct DeGennesModel {
  double gamma = 0.0;
  double sigma = 0.0;
  double t_max = 0.0;  // 0 selects max(sigma, 0) + 10
  int n_t = 400;       // starting number of grid cells
};

struct DeGennesResult {
  std::vector<double> values;                  // Richardson-extrapolated mu_1..mu_n
  std::vector<double> t;                       // grid of the returned functions
  std::vector<std::vector<double>> functions;  // L2-normalized, on `t`
  int cells = 0;                               // finest grid used
};

// Second-order finite differences with a ghost-node Robin row, symmetrized;
// the cell count doubles until successive extrapolated values differ < tol.
DeGennesResult degennes_eigen(const DeGennesModel& model, int n_levels,
                              bool want_functions = false, double tol = 1e-8);

// mu_n on a single grid without extrapolation (used for oracles and scans).
std::vector<double> degennes_eigen_fixed(const DeGennesModel& model, int n_levels, int cells);

struct DispersionMinimum {
  double theta = 0.0;
  double sigma_star = 0.0;
  double curvature = 0.0;
};

// Minimum over sigma of mu_n(gamma, sigma): coarse scan, golden section,
// curvature check and the interval check theta in (2n - 3, 2n - 1).
DispersionMinimum dispersion_minimum(double gamma, int n);

// Number of dispersion curves whose range meets [a, b] inside (2n-3, 2n-1):
// n when b reaches the minimum of mu_n, n - 1 otherwise.
int count_bands(double gamma, double a, double b);

struct DispersionRow {
  double gamma;
  int n;
  double sigma;
  double mu;
};

std::vector<DispersionRow> dispersion_table(const std::vector<double>& gammas, int n_max,
                                            const std::vector<double>& sigmas);

}  // namespace adiaband
