#pragma once

#include <span>
#include <vector>

#include "adiaband/types.hpp"

namespace adiaband {

// K0 X - X K1 = Y with Hermitian K0, K1 whose spectra are separated.
struct SylvesterProblem {
  Matrix K0;
  Matrix K1;
  Matrix Y;
  double delta = 0.0;  // spectral gap; the solvers require min|l_i - m_j| >= delta/2
};

// Rectangle [a_left, a_right] x [-half_height, half_height], traversed
// counterclockwise, with composite Gauss-Legendre quadrature on each side.
struct Contour {
  double a_left = 0.0;
  double a_right = 0.0;
  double half_height = 1.0;
  int nodes_per_panel = 32;
  int max_nodes_per_side = 1024;
  double tolerance = 1e-11;
};

// Contour enclosing [lo, hi] with margin delta/2 and half height 1 + delta.
Contour enclosing_contour(double lo, double hi, double delta);

bool is_hermitian(const Eigen::Ref<const Matrix>& a, double rel_tol = 1e-10);

// Direct route through both eigendecompositions.
Matrix solve_sylvester_eigen(const SylvesterProblem& p);

// Contour-integral route X = (1/2 pi i) oint (K0 - z)^-1 Y (K1 - z)^-1 dz.
// The default contour encloses spec(K0); a supplied contour must enclose
// spec(K0) and exclude spec(K1), each by at least delta/2.
Matrix solve_sylvester_contour(const SylvesterProblem& p);
Matrix solve_sylvester_contour(const SylvesterProblem& p, const Contour& c);

double sylvester_residual(const SylvesterProblem& p, const Matrix& x);

enum class SylvesterMethod { eigen, contour };

std::vector<Matrix> solve_sylvester_batch(std::span<const SylvesterProblem> problems,
                                          SylvesterMethod method);

// Spectral projector of Hermitian K onto its eigenvalues in [lo, hi], computed
// by contour quadrature of the resolvent. Eigenvalues outside the window must
// stay at least delta away from the selected ones.
Matrix riesz_projector(const Matrix& K, double lo, double hi, double delta);

}  // namespace adiaband
