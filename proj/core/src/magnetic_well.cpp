#include "adiaband/magnetic_well.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adiaband {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Adds the Taylor terms of f(z) times x1^ea xi1^eb, shifted by `shift` lattice
// steps, up to lattice order J.
void add_taylor(FiberPolynomialSymbol& sym, const Poly2& f, int ea, int eb, double scale,
                int shift, int J) {
  if (f.is_zero()) return;
  for (int n = 0; n + shift <= J; ++n)
    for (int a = 0; a <= n; ++a) {
      const int b = n - a;
      Poly2 c = f.derivative(a, b).swapped();
      if (c.is_zero()) continue;
      c *= scale / (factorial(a) * factorial(b));
      sym.terms.push_back({n + shift, ea + a, eb + b, std::move(c)});
    }
}

}  // namespace

FiberPolynomialSymbol magnetic_well_symbol(const MagneticWellSpec& spec) {
  if (spec.J < 0 || spec.J > kMaxMagneticTaylorOrder)
    throw std::invalid_argument("magnetic_well_symbol: J=" + std::to_string(spec.J) +
                                " outside [0," + std::to_string(kMaxMagneticTaylorOrder) + "]");
  if (!(spec.b0 > 0.0)) throw std::invalid_argument("magnetic_well_symbol: b0 must be positive");
  FiberPolynomialSymbol sym;
  sym.q0 = 2;
  sym.order = spec.J;
  const Poly2 G = spec.B_dot * spec.B_dot;
  const Poly2 A2 = spec.alpha_dot * spec.alpha_dot;
  const Poly2 dB = spec.B_dot.derivative(1, 0);
  const Poly2 dA = spec.alpha_dot.derivative(1, 0);
  const Poly2 W = 0.25 * (dB * dB) + 0.25 * (dA * dA);

  add_taylor(sym, G, 0, 2, 1.0, 0, spec.J);
  sym.terms.push_back({0, 2, 0, Poly2::constant(1.0)});
  add_taylor(sym, spec.alpha_dot, 1, 1, 2.0, 0, spec.J);
  add_taylor(sym, A2, 0, 2, 1.0, 0, spec.J);
  add_taylor(sym, spec.V_dot, 0, 0, 1.0, 0, spec.J);
  add_taylor(sym, W, 0, 0, 1.0, 2, spec.J);
  return sym;
}

double magnetic_fiber_eigenvalue(const MagneticWellSpec& spec, int p, double x2, double xi2) {
  if (p < 1) throw std::invalid_argument("magnetic_fiber_eigenvalue: p must be >= 1");
  return (2.0 * p - 1.0) * spec.B_dot(xi2, x2) + spec.V_dot(xi2, x2);
}

WellMinimum check_magnetic_well(const MagneticWellSpec& spec, const PhaseSpaceGrid& grid) {
  const Poly2 E = spec.B_dot + spec.V_dot;  // in (s1, s2) = (xi2, x2)
  const int nx = grid.n_x, nxi = grid.n_xi;
  auto value = [&](int i, int j) { return E(grid.xi(j), grid.x(i)); };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nxi; ++j)
      if (spec.B_dot(grid.xi(j), grid.x(i)) < spec.b0)
        throw std::invalid_argument("magnetic well: B below b0 at (x=" + std::to_string(grid.x(i)) +
                                    ", xi=" + std::to_string(grid.xi(j)) + ")");
  int count = 0, bi = -1, bj = -1;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nxi; ++j) {
      const double v = value(i, j);
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (!di && !dj) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= nxi) continue;
          if (value(ii, jj) <= v) {
            is_min = false;
            break;
          }
        }
      if (is_min) {
        ++count;
        bi = i;
        bj = j;
      }
    }
  if (count != 1) throw std::invalid_argument("magnetic well: B + V has " + std::to_string(count) +
                                              " local minima on the grid, expected one");
  if (bi == 0 || bj == 0 || bi == nx - 1 || bj == nxi - 1)
    throw std::invalid_argument("magnetic well: minimum of B + V on the grid boundary");

  // Newton refinement in (s1, s2) = (xi, x).
  double s1 = grid.xi(bj), s2 = grid.x(bi);
  const Poly2 g1 = E.derivative(1, 0), g2 = E.derivative(0, 1);
  const Poly2 h11 = E.derivative(2, 0), h12 = E.derivative(1, 1), h22 = E.derivative(0, 2);
  for (int it = 0; it < 50; ++it) {
    const double a = h11(s1, s2), b = h12(s1, s2), d = h22(s1, s2);
    const double det = a * d - b * b;
    if (!(det > 0.0)) break;
    const double r1 = g1(s1, s2), r2 = g2(s1, s2);
    const double d1 = (d * r1 - b * r2) / det, d2 = (a * r2 - b * r1) / det;
    s1 -= d1;
    s2 -= d2;
    if (std::abs(d1) + std::abs(d2) < 1e-15) break;
  }
  return {E(s1, s2), s2, s1};
}

}  // namespace adiaband
