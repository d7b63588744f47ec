#include "adiaband/matrix_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "adiaband/finite_difference.hpp"

namespace adiaband {

MatrixField::MatrixField(const PhaseSpaceGrid& grid, int rows, int cols)
    : grid_(grid), rows_(rows), cols_(cols) {
  grid_.validate();
  if (rows < 1 || cols < 1) throw std::invalid_argument("MatrixField: empty matrix shape");
  data_.assign(grid_.nodes() * block(), Complex(0.0, 0.0));
}

MatrixField MatrixField::constant(const PhaseSpaceGrid& grid, const Matrix& value) {
  MatrixField f(grid, static_cast<int>(value.rows()), static_cast<int>(value.cols()));
  for (std::size_t k = 0; k < f.nodes(); ++k) f.node(k) = value;
  return f;
}

MatrixField MatrixField::from_function(const PhaseSpaceGrid& grid, int rows, int cols,
                                       const std::function<Matrix(double, double)>& fn) {
  MatrixField f(grid, rows, cols);
  for (int i = 0; i < grid.n_x; ++i)
    for (int j = 0; j < grid.n_xi; ++j) {
      Matrix v = fn(grid.x(i), grid.xi(j));
      if (v.rows() != rows || v.cols() != cols)
        throw std::invalid_argument("MatrixField::from_function: wrong block shape");
      f.at(i, j) = v;
    }
  return f;
}

MatrixField MatrixField::identity(const PhaseSpaceGrid& grid, int m) {
  return constant(grid, Matrix::Identity(m, m));
}

void require_same_grid(const MatrixField& a, const MatrixField& b, const char* where) {
  if (!(a.grid() == b.grid())) throw GridMismatch(std::string(where) + ": grids differ");
}

static void require_same_shape(const MatrixField& a, const MatrixField& b, const char* where) {
  require_same_grid(a, b, where);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(where) + ": block shapes differ");
}

MatrixField& MatrixField::operator+=(const MatrixField& other) {
  require_same_shape(*this, other, "MatrixField +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

MatrixField& MatrixField::operator-=(const MatrixField& other) {
  require_same_shape(*this, other, "MatrixField -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

MatrixField& MatrixField::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

MatrixField MatrixField::adjoint() const {
  MatrixField out(grid_, cols_, rows_);
  for (std::size_t k = 0; k < nodes(); ++k) out.node(k) = node(k).adjoint();
  return out;
}

bool MatrixField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

MatrixField operator+(MatrixField a, const MatrixField& b) { return a += b; }
MatrixField operator-(MatrixField a, const MatrixField& b) { return a -= b; }
MatrixField operator*(Complex s, MatrixField a) { return a *= s; }

MatrixField multiply(const MatrixField& a, const MatrixField& b) {
  require_same_grid(a, b, "multiply");
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
  MatrixField out(a.grid(), a.rows(), b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.nodes());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) out.node(k).noalias() = a.node(k) * b.node(k);
  return out;
}

MatrixField multiply(const MatrixField& a, const MatrixField& b, const MatrixField& c) {
  return multiply(multiply(a, b), c);
}

MatrixField commutator(const MatrixField& a, const MatrixField& b) {
  return multiply(a, b) - multiply(b, a);
}

namespace {

// out = D in along the xi axis (inner index j).
void apply_xi(const MatrixField& in, MatrixField& out, const Stencil1D& st, double scale) {
  const auto& g = in.grid();
  const std::size_t bl = in.block();
  const Complex* src = in.data();
  Complex* dst = out.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.n_x; ++i) {
    for (int j = 0; j < g.n_xi; ++j) {
      Complex* o = dst + g.index(i, j) * bl;
      std::fill(o, o + bl, Complex(0.0, 0.0));
      const auto& w = st.weights(j);
      const int s0 = st.start(j);
      for (int s = 0; s < st.points(); ++s) {
        int jj = s0 + s;
        if (jj < 0) jj += g.n_xi;
        if (jj >= g.n_xi) jj -= g.n_xi;
        const double ws = w[s] * scale;
        const Complex* p = src + g.index(i, jj) * bl;
        for (std::size_t e = 0; e < bl; ++e) o[e] += ws * p[e];
      }
    }
  }
}

void apply_x(const MatrixField& in, MatrixField& out, const Stencil1D& st, double scale) {
  const auto& g = in.grid();
  const std::size_t bl = in.block();
  const Complex* src = in.data();
  Complex* dst = out.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.n_x; ++i) {
    const auto& w = st.weights(i);
    const int s0 = st.start(i);
    for (int j = 0; j < g.n_xi; ++j) {
      Complex* o = dst + g.index(i, j) * bl;
      std::fill(o, o + bl, Complex(0.0, 0.0));
      for (int s = 0; s < st.points(); ++s) {
        int ii = s0 + s;
        if (ii < 0) ii += g.n_x;
        if (ii >= g.n_x) ii -= g.n_x;
        const double ws = w[s] * scale;
        const Complex* p = src + g.index(ii, j) * bl;
        for (std::size_t e = 0; e < bl; ++e) o[e] += ws * p[e];
      }
    }
  }
}

}  // namespace

MatrixField derive(const MatrixField& f, int ax, int axi) {
  if (ax < 0 || axi < 0) throw std::invalid_argument("derive: negative order");
  const auto& g = f.grid();
  const bool per = g.boundary == Boundary::periodic;
  MatrixField cur = f;
  if (axi > 0) {
    const auto& st = cached_stencil(g.n_xi, axi, g.fd_order, per);
    MatrixField tmp(g, f.rows(), f.cols());
    apply_xi(cur, tmp, st, 1.0 / std::pow(g.dxi(), axi));
    cur = std::move(tmp);
  }
  if (ax > 0) {
    const auto& st = cached_stencil(g.n_x, ax, g.fd_order, per);
    MatrixField tmp(g, f.rows(), f.cols());
    apply_x(cur, tmp, st, 1.0 / std::pow(g.dx(), ax));
    cur = std::move(tmp);
  }
  return cur;
}

double operator_norm(const Eigen::Ref<const Matrix>& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  // Largest singular value through the Hermitian Gram matrix of the smaller side.
  Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double sup_norm(const MatrixField& f) {
  const auto& g = f.grid();
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_xi; ++j)
      if (g.is_interior(i, j)) best = std::max(best, operator_norm(f.at(i, j)));
  return best;
}

}  // namespace adiaband
