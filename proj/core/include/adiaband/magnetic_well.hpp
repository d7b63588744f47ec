#pragma once

#include "adiaband/quantize.hpp"

namespace adiaband {

// Normal-form magnetic well. The model functions are polynomials in
// (s1, s2) and are evaluated at s = (xi2, x2) of the base point.
struct MagneticWellSpec {
  Poly2 B_dot = Poly2::constant(1.0);
  Poly2 V_dot;
  Poly2 alpha_dot;
  int J = 2;  // Taylor truncation in sqrt(h) (lattice order, q0 = 2)
  double b0 = 1.0;
};

constexpr int kMaxMagneticTaylorOrder = 4;

// Formal symbol sum_{n<=J} h^{n/2} p_n(x1, xi1; x2, xi2) of
//   G(z) xi1^2 + (x1 + a(z) xi1)^2 + V(z) + h W(z),  z = (xi2 + sqrt(h) x1, x2 + sqrt(h) xi1),
// with G = B^2 and W = (d1 B)^2/4 + (d1 a)^2/4, Taylor expanded in sqrt(h).
FiberPolynomialSymbol magnetic_well_symbol(const MagneticWellSpec& spec);

// Fiber eigenvalue branch (2p - 1) B + V at the base point (x2, xi2), p >= 1.
double magnetic_fiber_eigenvalue(const MagneticWellSpec& spec, int p, double x2, double xi2);

struct WellMinimum {
  double mu0 = 0.0;
  double x = 0.0;
  double xi = 0.0;
};

// Checks B >= b0 on the grid and that B + V has a unique interior minimum
// there; returns it (refined by Newton steps on the polynomial).
WellMinimum check_magnetic_well(const MagneticWellSpec& spec, const PhaseSpaceGrid& grid);

}  // namespace adiaband
