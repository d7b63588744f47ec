#include "adiaband/degennes.hpp"

#include <algorithm>
#include <cmath>
#include <lapacke.h>
#include <stdexcept>
#include <string>

#include "adiaband/types.hpp"

namespace adiaband {

namespace {

struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;
  double w0 = 1.0;  // weight of the first unknown (1/2 for the Robin row)
  double t0 = 0.0;  // position of the first unknown
};

double t_max_for(const DeGennesModel& m) {
  return m.t_max > 0.0 ? m.t_max : std::max(m.sigma, 0.0) + 10.0;
}

Tridiagonal assemble(const DeGennesModel& m, int cells) {
  const double L = t_max_for(m);
  const double h = L / cells;
  const double h2 = h * h;
  auto V = [&](double t) { return (t - m.sigma) * (t - m.sigma); };
  Tridiagonal tri;
  if (std::isinf(m.gamma)) {
    // unknowns u_1..u_{cells-1}
    const int n = cells - 1;
    tri.d.resize(n);
    tri.e.assign(n - 1, -1.0 / h2);
    for (int i = 0; i < n; ++i) tri.d[i] = 2.0 / h2 + V((i + 1) * h);
    tri.t0 = h;
    return tri;
  }
  // unknowns u_0..u_{cells-1}; ghost u_{-1} = u_1 - 2 h gamma u_0. The
  // weighted form (w_0 = 1/2) is symmetric; scale row/col 0 by 1/sqrt(w_0).
  const int n = cells;
  tri.d.resize(n);
  tri.e.assign(n - 1, -1.0 / h2);
  for (int i = 1; i < n; ++i) tri.d[i] = 2.0 / h2 + V(i * h);
  const double b00 = (1.0 + h * m.gamma) / h2 + 0.5 * V(0.0);
  const double b01 = -1.0 / h2;
  tri.d[0] = 2.0 * b00;
  tri.e[0] = std::sqrt(2.0) * b01;
  tri.w0 = 0.5;
  return tri;
}

std::vector<double> solve_levels(const DeGennesModel& m, int n_levels, int cells,
                                 std::vector<double>* vectors, int* dim) {
  Tridiagonal tri = assemble(m, cells);
  const lapack_int n = static_cast<lapack_int>(tri.d.size());
  if (n_levels > n) throw std::invalid_argument("degennes: more levels than grid unknowns");
  std::vector<double> w(n);
  std::vector<double> z(vectors ? static_cast<std::size_t>(n) * n_levels : 1);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n_levels));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', n, tri.d.data(), tri.e.data(),
                     0.0, 0.0, 1, n_levels, 0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != n_levels)
    throw ConvergenceError("degennes: dstevr failed with info " + std::to_string(info));
  if (vectors) {
    *vectors = std::move(z);
    *dim = n;
  }
  w.resize(n_levels);
  return w;
}

void check_model(const DeGennesModel& m, int n_levels) {
  if (n_levels < 1) throw std::invalid_argument("degennes: need at least one level");
  if (!(m.gamma >= 0.0)) throw std::invalid_argument("degennes: gamma must be >= 0 or infinite");
  if (!std::isfinite(m.sigma)) throw std::invalid_argument("degennes: sigma must be finite");
  if (m.t_max > 0.0 && m.t_max < m.sigma + 8.0)
    throw std::invalid_argument("degennes: t_max must be at least sigma + 8");
  if (m.n_t < 400) throw std::invalid_argument("degennes: n_t must be at least 400");
}

}  // namespace

std::vector<double> degennes_eigen_fixed(const DeGennesModel& model, int n_levels, int cells) {
  if (n_levels < 1 || cells < 4) throw std::invalid_argument("degennes: bad grid");
  return solve_levels(model, n_levels, cells, nullptr, nullptr);
}

DeGennesResult degennes_eigen(const DeGennesModel& model, int n_levels, bool want_functions,
                              double tol) {
  check_model(model, n_levels);
  constexpr int kMaxCells = 1 << 20;
  int cells = model.n_t;
  auto coarse = solve_levels(model, n_levels, cells, nullptr, nullptr);
  auto fine = solve_levels(model, n_levels, 2 * cells, nullptr, nullptr);
  auto extrapolate = [&](const std::vector<double>& c, const std::vector<double>& f) {
    std::vector<double> r(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) r[k] = (4.0 * f[k] - c[k]) / 3.0;
    return r;
  };
  std::vector<double> prev = extrapolate(coarse, fine);
  for (;;) {
    cells *= 2;
    if (2 * cells > kMaxCells)
      throw ConvergenceError("degennes: refinement did not reach tolerance " +
                             std::to_string(tol));
    coarse = std::move(fine);
    fine = solve_levels(model, n_levels, 2 * cells, nullptr, nullptr);
    std::vector<double> cur = extrapolate(coarse, fine);
    double change = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) change = std::max(change, std::abs(cur[k] - prev[k]));
    prev = std::move(cur);
    if (change < tol) break;
  }
  DeGennesResult r;
  r.values = prev;
  r.cells = 2 * cells;
  if (want_functions) {
    std::vector<double> z;
    int dim = 0;
    const int c = model.n_t;
    solve_levels(model, n_levels, c, &z, &dim);
    const Tridiagonal tri = assemble(model, c);
    const double h = t_max_for(model) / c;
    for (int i = 0; i < dim; ++i) r.t.push_back(tri.t0 + i * h);
    for (int k = 0; k < n_levels; ++k) {
      std::vector<double> f(z.begin() + static_cast<std::ptrdiff_t>(k) * dim,
                            z.begin() + static_cast<std::ptrdiff_t>(k + 1) * dim);
      f[0] /= std::sqrt(tri.w0);  // undo the symmetrizing scale
      double norm = 0.0;
      for (int i = 0; i < dim; ++i) norm += (i == 0 ? tri.w0 : 1.0) * f[i] * f[i] * h;
      norm = std::sqrt(norm);
      // sign convention: positive near the first maximum of |f|
      const auto peak = std::max_element(f.begin(), f.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
      const double sign = *peak < 0.0 ? -1.0 : 1.0;
      for (auto& v : f) v *= sign / norm;
      r.functions.push_back(std::move(f));
    }
  }
  return r;
}

namespace {

double mu_n(double gamma, int n, double sigma) {
  DeGennesModel m;
  m.gamma = gamma;
  m.sigma = sigma;
  return degennes_eigen(m, n).values[n - 1];
}

}  // namespace

DispersionMinimum dispersion_minimum(double gamma, int n) {
  if (n < 1) throw std::invalid_argument("dispersion_minimum: n must be >= 1");
  // Coarse scan on a single moderately fine grid.
  const double lo = -3.0, hi = 8.0, step = 0.25;
  std::vector<double> sig, val;
  for (double s = lo; s <= hi + 1e-12; s += step) {
    DeGennesModel m;
    m.gamma = gamma;
    m.sigma = s;
    sig.push_back(s);
    val.push_back(degennes_eigen_fixed(m, n, 2000)[n - 1]);
  }
  const auto it = std::min_element(val.begin(), val.end());
  const std::size_t k = static_cast<std::size_t>(it - val.begin());
  if (k == 0 || k + 1 == val.size())
    throw ConvergenceError("dispersion_minimum: no interior minimum of mu_" + std::to_string(n) +
                           " on sigma in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "] (curve monotone, bracket failure)");
  double a = sig[k - 1], b = sig[k + 1];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = mu_n(gamma, n, c), fd = mu_n(gamma, n, d);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = mu_n(gamma, n, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = mu_n(gamma, n, d);
    }
  }
  DispersionMinimum r;
  r.sigma_star = 0.5 * (a + b);
  r.theta = mu_n(gamma, n, r.sigma_star);
  const double hs = 0.05;
  r.curvature = (mu_n(gamma, n, r.sigma_star + hs) - 2.0 * r.theta +
                 mu_n(gamma, n, r.sigma_star - hs)) / (hs * hs);
  if (!(r.curvature > 1e-6))
    throw ConvergenceError("dispersion_minimum: flat curvature " + std::to_string(r.curvature));
  if (!(r.theta > 2.0 * n - 3.0 && r.theta < 2.0 * n - 1.0))
    throw Error("dispersion_minimum: value " + std::to_string(r.theta) + " outside (" +
                std::to_string(2 * n - 3) + ", " + std::to_string(2 * n - 1) + ")");
  return r;
}

int count_bands(double gamma, double a, double b) {
  if (!(b >= a)) throw std::invalid_argument("count_bands: empty window");
  const int n = static_cast<int>(std::floor((a + 3.0) / 2.0));
  if (!(a > 2.0 * n - 3.0 && b < 2.0 * n - 1.0))
    throw std::invalid_argument("count_bands: window [" + std::to_string(a) + ", " +
                                std::to_string(b) + "] straddles a threshold 2n-1");
  if (n < 1) return 0;
  // The Dirichlet curves decrease to their infimum 2n - 1 without reaching it,
  // so a window below 2n - 1 never contains the bottom of mu_n.
  if (std::isinf(gamma)) return n - 1;
  const DispersionMinimum dm = dispersion_minimum(gamma, n);
  return b >= dm.theta ? n : n - 1;
}

std::vector<DispersionRow> dispersion_table(const std::vector<double>& gammas, int n_max,
                                            const std::vector<double>& sigmas) {
  if (n_max < 1) throw std::invalid_argument("dispersion_table: n_max must be >= 1");
  std::vector<DispersionRow> rows;
  for (double g : gammas)
    for (double s : sigmas) {
      DeGennesModel m;
      m.gamma = g;
      m.sigma = s;
      const auto v = degennes_eigen(m, n_max).values;
      for (int n = 1; n <= n_max; ++n) rows.push_back({g, n, s, v[n - 1]});
    }
  std::stable_sort(rows.begin(), rows.end(), [](const DispersionRow& x, const DispersionRow& y) {
    if (x.gamma != y.gamma) return x.gamma < y.gamma;
    if (x.n != y.n) return x.n < y.n;
    return x.sigma < y.sigma;
  });
  return rows;
}

}  // namespace adiaband
