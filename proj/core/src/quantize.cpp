#include "adiaband/quantize.hpp"
#include "adiaband/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <lapacke.h>
#include <map>
#include <limits>
#include <numbers>
#include <string>

namespace adiaband {

namespace {

constexpr double kPi = std::numbers::pi;

void check_base(const BaseGrid& g, double h) {
  if (g.n < 2) throw std::invalid_argument("BaseGrid: need at least two nodes");
  if (!(g.x_max > g.x_min)) throw std::invalid_argument("BaseGrid: empty interval");
  if (!(h > 0.0)) throw std::invalid_argument("quantization: h must be positive");
}

}  // namespace

double nyquist_frequency(const BaseGrid& grid, double h) { return kPi * h / grid.dx(); }

XiQuadrature xi_quadrature(const BaseGrid& g, double h) {
  check_base(g, h);
  XiQuadrature q;
  if (g.periodic) {
    if (g.xi_extent > 0.0 && nyquist_frequency(g, h) < g.xi_extent)
      throw ResolutionError("base grid too coarse: pi*h/dx = " +
                            std::to_string(nyquist_frequency(g, h)) + " < xi extent " +
                            std::to_string(g.xi_extent));
    const int N = g.n;
    const double L = N * g.dx();
    const int kmax = N / 2;
    for (int k = -kmax; k <= kmax; ++k) {
      double w = 1.0 / N;
      if (N % 2 == 0 && std::abs(k) == kmax) w *= 0.5;
      q.xi.push_back(2.0 * kPi * h * k / L);
      q.weight.push_back(w);
    }
    return q;
  }
  if (!(g.xi_max > 0.0) || g.xi_nodes < 3)
    throw std::invalid_argument("decaying quantization needs xi_max > 0 and xi_nodes >= 3");
  const double dxi = 2.0 * g.xi_max / (g.xi_nodes - 1);
  const double span = g.x_max - g.x_min;
  if (dxi * span >= kPi * h)
    throw ResolutionError("xi quadrature too coarse for the base interval: dxi*L/h = " +
                          std::to_string(dxi * span / h) + " >= pi");
  const double scale = g.dx() * dxi / (2.0 * kPi * h);
  for (int k = 0; k < g.xi_nodes; ++k) {
    q.xi.push_back(-g.xi_max + k * dxi);
    q.weight.push_back((k == 0 || k == g.xi_nodes - 1) ? 0.5 * scale : scale);
  }
  return q;
}

Matrix weyl_quantize_matrix_1d(const MatrixSymbol& a, int rows, int cols, double h,
                               const BaseGrid& g) {
  const XiQuadrature q = xi_quadrature(g, h);
  const int N = g.n;
  const int nk = static_cast<int>(q.xi.size());
  // phase(d, k) = w_k exp(i d dx xi_k / h), d = i - j in (-N, N)
  Matrix phase(2 * N - 1, nk);
  for (int d = -(N - 1); d <= N - 1; ++d)
    for (int k = 0; k < nk; ++k)
      phase(d + N - 1, k) = q.weight[k] * std::polar(1.0, d * g.dx() * q.xi[k] / h);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(N) * rows, static_cast<Eigen::Index>(N) * cols);
  double edge = 0.0, peak = 0.0;
  // the symbol callback may throw (interpolation outside its grid)
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) reduction(max : edge, peak)
  for (int s = 0; s <= 2 * N - 2; ++s) {
    const double xm = g.mid(s);
    std::vector<Matrix> vals(nk, Matrix(rows, cols));
    try {
      for (int k = 0; k < nk; ++k) a(xm, q.xi[k], vals[k]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
      continue;
    }
    for (int k = 0; k < nk; ++k) {
      const double v = vals[k].cwiseAbs().maxCoeff();
      peak = std::max(peak, v);
      if (k == 0 || k == nk - 1) edge = std::max(edge, v);
    }
    const int ilo = std::max(0, s - (N - 1)), ihi = std::min(N - 1, s);
    Matrix blk(rows, cols);
    for (int i = ilo; i <= ihi; ++i) {
      const int j = s - i;
      blk.setZero();
      const int d = i - j + N - 1;
      for (int k = 0; k < nk; ++k) blk += phase(d, k) * vals[k];
      out.block(static_cast<Eigen::Index>(i) * rows, static_cast<Eigen::Index>(j) * cols, rows, cols) = blk;
    }
  }
  if (failure) std::rethrow_exception(failure);
  if (!g.periodic && edge > 1e-12 * std::max(peak, 1e-300))
    throw ResolutionError("symbol does not decay at the xi window edge: relative size " +
                          std::to_string(edge / peak));
  return out;
}

Matrix weyl_quantize_scalar_1d(const ScalarSymbol& a, double h, const BaseGrid& grid) {
  return weyl_quantize_matrix_1d([&](double x, double xi, Matrix& out) { out(0, 0) = a(x, xi); },
                                 1, 1, h, grid);
}

int FiberPolynomialSymbol::fiber_degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.a + t.b);
  return d;
}

FormalSymbol FiberPolynomialSymbol::to_formal_symbol(const PhaseSpaceGrid& grid,
                                                     const FockLadder& ladder) const {
  const int m = ladder.m();
  FormalSymbol out(grid, m, m, q0, order);
  std::map<int, MatrixField> acc;
  for (const auto& t : terms) {
    if (t.n > order) continue;
    const Matrix F = ladder.weyl_monomial(t.a, t.b);
    auto it = acc.find(t.n);
    if (it == acc.end()) it = acc.emplace(t.n, MatrixField(grid, m, m)).first;
    MatrixField& f = it->second;
    for (int i = 0; i < grid.n_x; ++i)
      for (int j = 0; j < grid.n_xi; ++j) f.at(i, j) += t.coeff(grid.x(i), grid.xi(j)) * F;
  }
  for (auto& [n, f] : acc) out.set(n, std::move(f));
  return out;
}

Matrix FiberPolynomialSymbol::evaluate(double x, double xi, double h,
                                       const FockLadder& ladder) const {
  Matrix out = Matrix::Zero(ladder.m(), ladder.m());
  for (const auto& t : terms)
    if (t.n <= order)
      out += std::pow(h, static_cast<double>(t.n) / q0) * t.coeff(x, xi) *
             ladder.weyl_monomial(t.a, t.b);
  return out;
}

Matrix quantize_fiber_model(const FiberPolynomialSymbol& sym, const FockLadder& ladder,
                            const BaseGrid& base, double h) {
  const int m = ladder.m();
  const int deg = sym.fiber_degree();
  if (2 * deg > m)
    throw std::invalid_argument("quantize_fiber_model: fiber degree " + std::to_string(deg) +
                                " exceeds m/2 for m=" + std::to_string(m));
  // Group the base coefficients by fiber monomial, h inserted.
  std::map<std::pair<int, int>, std::vector<std::pair<double, const Poly2*>>> groups;
  for (const auto& t : sym.terms)
    if (t.n <= sym.order)
      groups[{t.a, t.b}].push_back({std::pow(h, static_cast<double>(t.n) / sym.q0), &t.coeff});

  const Eigen::Index N = base.n;
  Matrix out = Matrix::Zero(N * m, N * m);
  for (const auto& [ab, parts] : groups) {
    const Matrix F = ladder.weyl_monomial(ab.first, ab.second);
    const Matrix K = weyl_quantize_scalar_1d(
        [&](double x, double xi) {
          double v = 0.0;
          for (const auto& [w, p] : parts) v += w * (*p)(x, xi);
          return Complex(v, 0.0);
        },
        h, base);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j)
        if (K(i, j) != Complex(0.0, 0.0)) out.block(i * m, j * m, m, m) += K(i, j) * F;
  }
  return out;
}

namespace {

void check_cap(const Matrix& op, int cap) {
  if (op.rows() != op.cols()) throw std::invalid_argument("spectrum: matrix must be square");
  if (op.rows() > cap)
    throw std::invalid_argument("spectrum: matrix size " + std::to_string(op.rows()) +
                                " exceeds cap " + std::to_string(cap));
}

SpectrumResult zheevr(const Matrix& op, char range, double vl, double vu, int il, int iu,
                      bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(op.rows());
  SpectrumResult r;
  if (n == 0) return r;
  Matrix a = op;
  std::vector<double> w(n);
  Matrix z(n, want_vectors ? n : 1);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', range, 'L', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n, vl, vu, il, iu, 0.0, &found,
      w.data(), reinterpret_cast<lapack_complex_double*>(z.data()), n, isuppz.data());
  if (info != 0) throw ConvergenceError("zheevr failed with info " + std::to_string(info));
  r.values = Eigen::Map<RealVector>(w.data(), found);
  if (want_vectors) r.vectors = z.leftCols(found);
  return r;
}

}  // namespace

SpectrumResult spectrum(const Matrix& op, double lo, double hi, bool want_vectors, int size_cap) {
  check_cap(op, size_cap);
  if (!(hi >= lo)) throw std::invalid_argument("spectrum: empty window");
  if (is_hermitian(op)) {
    if (lo == hi) return SpectrumResult{};
    // zheevr selects (vl, vu]; nudge the lower end so lo itself is kept.
    const double vl = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    return zheevr(op, 'V', vl, hi, 0, 0, want_vectors);
  }
  Eigen::ComplexEigenSolver<Matrix> es(op, want_vectors);
  if (es.info() != Eigen::Success) throw ConvergenceError("spectrum: eigensolver failed");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double re = es.eigenvalues()(i).real();
    if (re >= lo && re <= hi) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
  });
  SpectrumResult r;
  r.hermitian = false;
  r.complex_values.resize(static_cast<Eigen::Index>(idx.size()));
  if (want_vectors) r.vectors.resize(op.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    r.complex_values(k) = es.eigenvalues()(idx[k]);
    if (want_vectors) r.vectors.col(k) = es.eigenvectors().col(idx[k]);
  }
  r.values = r.complex_values.real();
  return r;
}

SpectrumResult lowest_eigenpairs(const Matrix& op, int count, bool want_vectors, int size_cap) {
  check_cap(op, size_cap);
  if (!is_hermitian(op)) throw std::invalid_argument("lowest_eigenpairs: matrix not Hermitian");
  const int n = static_cast<int>(op.rows());
  count = std::min(count, n);
  if (count <= 0) return SpectrumResult{};
  return zheevr(op, 'I', 0.0, 0.0, 1, count, want_vectors);
}

FieldInterpolator::FieldInterpolator(const MatrixField& field, int points)
    : field_(field), points_(points) {
  const auto& g = field.grid();
  if (points < 2 || points > std::min(g.n_x, g.n_xi))
    throw std::invalid_argument("FieldInterpolator: bad stencil size");
}

namespace {

// Stencil start and Lagrange weights on unit-spaced nodes for coordinate u
// (in grid units). Returns false when u lies outside a clamped axis.
bool lagrange_axis(double u, int n, int p, bool periodic, int& start, std::vector<double>& w) {
  if (!periodic && (u < -1e-9 || u > n - 1 + 1e-9)) return false;
  const int base = static_cast<int>(std::floor(u));
  start = base - p / 2 + 1;
  if (!periodic) start = std::clamp(start, 0, n - p);
  w.assign(p, 1.0);
  for (int a = 0; a < p; ++a) {
    const double xa = start + a;
    for (int b = 0; b < p; ++b)
      if (b != a) w[a] *= (u - (start + b)) / (xa - (start + b));
  }
  return true;
}

}  // namespace

void FieldInterpolator::operator()(double x, double xi, Matrix& out) const {
  const auto& g = field_.grid();
  const bool per = g.boundary == Boundary::periodic;
  const double ux = (x - g.x_min) / g.dx(), uxi = (xi - g.xi_min) / g.dxi();
  int sx = 0, sxi = 0;
  std::vector<double> wx, wxi;
  if (!lagrange_axis(ux, g.n_x, points_, per, sx, wx) ||
      !lagrange_axis(uxi, g.n_xi, points_, per, sxi, wxi))
    throw ResolutionError("interpolation point (" + std::to_string(x) + ", " +
                          std::to_string(xi) + ") outside the symbol grid");
  out.setZero(field_.rows(), field_.cols());
  for (int a = 0; a < points_; ++a) {
    const int i = ((sx + a) % g.n_x + g.n_x) % g.n_x;
    for (int b = 0; b < points_; ++b) {
      const int j = ((sxi + b) % g.n_xi + g.n_xi) % g.n_xi;
      out += (wx[a] * wxi[b]) * field_.at(i, j);
    }
  }
}

}  // namespace adiaband
