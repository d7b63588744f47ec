#pragma once

#include <functional>
#include <vector>

#include "adiaband/fock.hpp"
#include "adiaband/formal_symbol.hpp"
#include "adiaband/polynomial.hpp"

namespace adiaband {

// Base grid x_i = x_min + i*dx, dx = (x_max - x_min)/n.
// periodic: exact discrete transform on the frequencies xi_k = 2 pi h k / (n dx),
//           |k| <= n/2 with the Nyquist pair split in halves.
// decaying: trapezoid in xi on [-xi_max, xi_max] with xi_nodes points; the
//           symbol must decay below 1e-12 (relative) at the window edge.
struct BaseGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  int n = 2;
  bool periodic = true;
  double xi_max = 0.0;
  int xi_nodes = 0;
  // Optional resolution requirement: the symbol varies on |xi| <= xi_extent.
  double xi_extent = 0.0;

  double dx() const { return (x_max - x_min) / n; }
  double x(int i) const { return x_min + i * dx(); }
  // Midpoint (x_i + x_j)/2 indexed by s = i + j.
  double mid(int s) const { return x_min + 0.5 * s * dx(); }
};

// Frequencies and weights of the xi sum; K_ij = sum_k w_k e^{i(x_i-x_j)xi_k/h} a(mid, xi_k).
struct XiQuadrature {
  std::vector<double> xi;
  std::vector<double> weight;
};

XiQuadrature xi_quadrature(const BaseGrid& grid, double h);

// Highest frequency representable on a periodic grid, pi h / dx.
double nyquist_frequency(const BaseGrid& grid, double h);

using ScalarSymbol = std::function<Complex(double x, double xi)>;
// Fills `out` (rows x cols) with the symbol value at (x, xi).
using MatrixSymbol = std::function<void(double x, double xi, Matrix& out)>;

Matrix weyl_quantize_scalar_1d(const ScalarSymbol& a, double h, const BaseGrid& grid);

// Matrix-valued version: the result acts on base (x) fiber with base index
// major, entry (i*rows + r, j*cols + c).
Matrix weyl_quantize_matrix_1d(const MatrixSymbol& a, int rows, int cols, double h,
                               const BaseGrid& grid);

// Symbol polynomial in the fiber variables (x1, xi1) with coefficients
// depending polynomially on the base point (x, xi):
// sum over terms h^{n/q0} c(x, xi) x1^a xi1^b.
struct FiberTerm {
  int n = 0;
  int a = 0;
  int b = 0;
  Poly2 coeff;  // in (x, xi) of the base
};

struct FiberPolynomialSymbol {
  int q0 = 1;
  int order = 0;
  std::vector<FiberTerm> terms;

  int fiber_degree() const;
  // Nodewise Fock matrices: coefficient n is sum_terms c(x, xi) Weyl(x1^a xi1^b).
  FormalSymbol to_formal_symbol(const PhaseSpaceGrid& grid, const FockLadder& ladder) const;
  // Single matrix at a base point with h inserted.
  Matrix evaluate(double x, double xi, double h, const FockLadder& ladder) const;
};

// Two-scale quantization: base scale h on `base`, fiber scale 1 on the ladder.
Matrix quantize_fiber_model(const FiberPolynomialSymbol& sym, const FockLadder& ladder,
                            const BaseGrid& base, double h);

struct SpectrumResult {
  bool hermitian = true;
  RealVector values;          // ascending, Hermitian case
  Matrix vectors;             // columns, when requested
  Eigen::VectorXcd complex_values;  // non-Hermitian case, sorted by real part
};

constexpr int kDefaultSizeCap = 8192;

// Eigenvalues in [lo, hi]. Hermitian matrices go through LAPACK zheevr.
SpectrumResult spectrum(const Matrix& op, double lo, double hi, bool want_vectors = false,
                        int size_cap = kDefaultSizeCap);

// The `count` lowest eigenvalues of a Hermitian matrix.
SpectrumResult lowest_eigenpairs(const Matrix& op, int count, bool want_vectors = false,
                                 int size_cap = kDefaultSizeCap);

// Local tensor Lagrange interpolation of a field at an arbitrary point.
class FieldInterpolator {
 public:
  FieldInterpolator(const MatrixField& field, int points = 8);
  void operator()(double x, double xi, Matrix& out) const;

 private:
  const MatrixField& field_;
  int points_;
};

}  // namespace adiaband
