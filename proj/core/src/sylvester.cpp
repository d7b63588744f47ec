#include "adiaband/sylvester.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace adiaband {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;
};

GaussLegendre gauss_legendre(int n) {
  GaussLegendre g{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

const GaussLegendre& gl32() {
  static const GaussLegendre g = gauss_legendre(32);
  return g;
}

RealVector hermitian_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// sum over the rectangle boundary of f(z) dz, panels per side fixed.
template <class F>
Matrix integrate_rectangle(const Contour& c, int panels, Eigen::Index rows, Eigen::Index cols,
                           F&& f) {
  const std::array<Complex, 5> corners = {
      Complex(c.a_left, -c.half_height), Complex(c.a_right, -c.half_height),
      Complex(c.a_right, c.half_height), Complex(c.a_left, c.half_height),
      Complex(c.a_left, -c.half_height)};
  const auto& gl = gl32();
  Matrix sum = Matrix::Zero(rows, cols);
  for (int side = 0; side < 4; ++side) {
    const Complex z0 = corners[side], z1 = corners[side + 1];
    const Complex dz = (z1 - z0) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
      const Complex a = z0 + static_cast<double>(p) * dz;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const Complex z = a + 0.5 * (gl.x[q] + 1.0) * dz;
        sum.noalias() += (0.5 * gl.w[q]) * dz * f(z);
      }
    }
  }
  return sum;
}

template <class F>
Matrix adaptive_contour_integral(const Contour& c, Eigen::Index rows, Eigen::Index cols, F&& f) {
  int panels = std::max(1, c.nodes_per_panel / 32);
  Matrix prev = integrate_rectangle(c, panels, rows, cols, f);
  for (;;) {
    if (32 * panels * 2 > c.max_nodes_per_side)
      throw ContourError("contour quadrature did not converge within " +
                         std::to_string(c.max_nodes_per_side) + " nodes per side");
    panels *= 2;
    Matrix next = integrate_rectangle(c, panels, rows, cols, f);
    const double change = (next - prev).norm();
    const double scale = std::max(1.0, next.norm());
    if (change <= c.tolerance * scale) return next;
    prev = std::move(next);
  }
}

double distance_to_interval(double v, double lo, double hi) {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

void require_square_hermitian(const Matrix& k, const char* name) {
  if (k.rows() != k.cols() || k.rows() == 0)
    throw std::invalid_argument(std::string("sylvester: ") + name + " must be square");
  if (!is_hermitian(k)) throw std::invalid_argument(std::string("sylvester: ") + name +
                                                    " is not Hermitian");
}

void check_problem(const SylvesterProblem& p) {
  require_square_hermitian(p.K0, "K0");
  require_square_hermitian(p.K1, "K1");
  if (p.Y.rows() != p.K0.rows() || p.Y.cols() != p.K1.rows())
    throw std::invalid_argument("sylvester: Y has the wrong shape");
  if (!(p.delta > 0.0)) throw std::invalid_argument("sylvester: delta must be positive");
}

}  // namespace

Contour enclosing_contour(double lo, double hi, double delta) {
  Contour c;
  c.a_left = lo - 0.5 * delta;
  c.a_right = hi + 0.5 * delta;
  c.half_height = 1.0 + delta;
  return c;
}

bool is_hermitian(const Eigen::Ref<const Matrix>& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix solve_sylvester_eigen(const SylvesterProblem& p) {
  check_problem(p);
  Eigen::SelfAdjointEigenSolver<Matrix> e0(p.K0), e1(p.K1);
  const RealVector& l = e0.eigenvalues();
  const RealVector& m = e1.eigenvalues();
  Matrix yt = e0.eigenvectors().adjoint() * p.Y * e1.eigenvectors();
  for (Eigen::Index i = 0; i < l.size(); ++i)
    for (Eigen::Index j = 0; j < m.size(); ++j) {
      const double d = l(i) - m(j);
      if (std::abs(d) < 0.5 * p.delta)
        throw GapViolation("sylvester: eigenvalues " + std::to_string(l(i)) + " and " +
                               std::to_string(m(j)) + " closer than delta/2",
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN());
      yt(i, j) /= d;
    }
  return e0.eigenvectors() * yt * e1.eigenvectors().adjoint();
}

Matrix solve_sylvester_contour(const SylvesterProblem& p) {
  check_problem(p);
  const RealVector l = hermitian_eigenvalues(p.K0);
  return solve_sylvester_contour(p, enclosing_contour(l.minCoeff(), l.maxCoeff(), p.delta));
}

Matrix solve_sylvester_contour(const SylvesterProblem& p, const Contour& c) {
  check_problem(p);
  const RealVector l = hermitian_eigenvalues(p.K0);
  const RealVector m = hermitian_eigenvalues(p.K1);
  const double slack = 1e-12 * std::max(1.0, std::abs(c.a_left) + std::abs(c.a_right));
  const double need = 0.5 * p.delta - slack;
  for (Eigen::Index i = 0; i < l.size(); ++i)
    if (l(i) - c.a_left < need || c.a_right - l(i) < need)
      throw ContourError("contour does not enclose eigenvalue " + std::to_string(l(i)) +
                         " of K0 with margin delta/2");
  for (Eigen::Index j = 0; j < m.size(); ++j)
    if (distance_to_interval(m(j), c.a_left, c.a_right) < need)
      throw ContourError("eigenvalue " + std::to_string(m(j)) +
                         " of K1 lies inside or within delta/2 of the contour");

  const Eigen::Index n0 = p.K0.rows(), n1 = p.K1.rows();
  const Matrix I0 = Matrix::Identity(n0, n0), I1 = Matrix::Identity(n1, n1);
  auto integrand = [&](Complex z) -> Matrix {
    // (K0 - z)^-1 Y (K1 - z)^-1, the right factor applied through the adjoint solve.
    Eigen::PartialPivLU<Matrix> lu0(p.K0 - z * I0);
    Eigen::PartialPivLU<Matrix> lu1((p.K1 - z * I1).adjoint());
    Matrix left = lu0.solve(p.Y);
    return lu1.solve(left.adjoint()).adjoint();
  };
  const Matrix integral = adaptive_contour_integral(c, n0, n1, integrand);
  Matrix x = integral / Complex(0.0, 2.0 * kPi);
  const double res = sylvester_residual(p, x);
  if (res > 1e-8 * std::max(1.0, p.Y.norm()))
    throw ContourError("contour solution residual " + std::to_string(res) + " above 1e-8");
  return x;
}

double sylvester_residual(const SylvesterProblem& p, const Matrix& x) {
  return (p.K0 * x - x * p.K1 - p.Y).norm();
}

std::vector<Matrix> solve_sylvester_batch(std::span<const SylvesterProblem> problems,
                                          SylvesterMethod method) {
  std::vector<Matrix> out(problems.size());
  const auto n = static_cast<std::ptrdiff_t>(problems.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      out[k] = method == SylvesterMethod::eigen ? solve_sylvester_eigen(problems[k])
                                                : solve_sylvester_contour(problems[k]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Matrix riesz_projector(const Matrix& K, double lo, double hi, double delta) {
  require_square_hermitian(K, "K");
  if (!(delta > 0.0)) throw std::invalid_argument("riesz_projector: delta must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("riesz_projector: empty window");
  const RealVector ev = hermitian_eigenvalues(K);
  const Eigen::Index n = K.rows();
  double sel_lo = std::numeric_limits<double>::infinity();
  double sel_hi = -sel_lo;
  std::vector<double> rest;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) >= lo && ev(i) <= hi) {
      sel_lo = std::min(sel_lo, ev(i));
      sel_hi = std::max(sel_hi, ev(i));
    } else {
      rest.push_back(ev(i));
    }
  }
  if (!(sel_hi >= sel_lo)) return Matrix::Zero(n, n);
  for (double v : rest)
    if (distance_to_interval(v, sel_lo, sel_hi) < delta)
      throw GapViolation("riesz_projector: eigenvalue " + std::to_string(v) +
                             " within delta of the selected group",
                         std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN());
  if (rest.empty()) return Matrix::Identity(n, n);
  const Contour c = enclosing_contour(sel_lo, sel_hi, delta);
  const Matrix I = Matrix::Identity(n, n);
  auto integrand = [&](Complex z) -> Matrix { return (K - z * I).partialPivLu().solve(I); };
  return adaptive_contour_integral(c, n, n, integrand) / Complex(0.0, -2.0 * kPi);
}

}  // namespace adiaband
