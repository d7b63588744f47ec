#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "adiaband/degennes.hpp"
#include "adiaband/magnetic_well.hpp"
#include "adiaband/projector.hpp"

using namespace adiaband;

namespace {

MagneticWellSpec curved_well() {
  MagneticWellSpec spec;
  spec.B_dot = Poly2::constant(1.0) + Poly2::monomial(2, 0, 0.25) + Poly2::monomial(0, 2, 0.25);
  return spec;
}

// Shooting oracle for -u'' + (t - sigma)^2 u = mu u, u'(0) = gamma u(0):
// RK4 from t = 0 to L; below mu_1 the solution never changes sign.
bool below_ground(double gamma, double sigma, double mu) {
  const double L = std::max(sigma, 0.0) + 9.0;
  const int steps = 18000;
  const double dt = L / steps;
  double u = 1.0, v = gamma;
  auto f = [&](double t, double uu) { return ((t - sigma) * (t - sigma) - mu) * uu; };
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    const double k1u = v, k1v = f(t, u);
    const double k2u = v + 0.5 * dt * k1v, k2v = f(t + 0.5 * dt, u + 0.5 * dt * k1u);
    const double k3u = v + 0.5 * dt * k2v, k3v = f(t + 0.5 * dt, u + 0.5 * dt * k2u);
    const double k4u = v + dt * k3v, k4v = f(t + dt, u + dt * k3u);
    u += dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (u <= 0.0) return false;
  }
  return true;
}

double ground_by_shooting(double gamma, double sigma) {
  double lo = -2.0, hi = 20.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below_ground(gamma, sigma, mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double theta0_oracle() {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.3, b = 1.3;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = ground_by_shooting(0.0, c), fd = ground_by_shooting(0.0, d);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = ground_by_shooting(0.0, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = ground_by_shooting(0.0, d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

TEST(MagneticWellSymbol, FlatFieldIsPureOscillator) {
  MagneticWellSpec spec;
  spec.J = 4;
  const auto sym = magnetic_well_symbol(spec);
  std::set<std::pair<int, int>> seen;
  for (const auto& t : sym.terms) {
    if (t.coeff.is_zero()) continue;
    EXPECT_EQ(t.n, 0);
    seen.insert({t.a, t.b});
    EXPECT_NEAR(t.coeff(0.3, -0.7), 1.0, 1e-14);
  }
  EXPECT_EQ(seen, (std::set<std::pair<int, int>>{{2, 0}, {0, 2}}));
}

TEST(MagneticWellSymbol, DegreeAndParityPerOrder) {
  auto spec = curved_well();
  spec.alpha_dot = Poly2::monomial(1, 0, 0.2);
  spec.V_dot = Poly2::monomial(0, 1, 0.1) * Poly2::monomial(0, 1, 1.0);
  spec.J = 4;
  const auto sym = magnetic_well_symbol(spec);
  EXPECT_EQ(sym.q0, 2);
  for (const auto& t : sym.terms) {
    if (t.coeff.is_zero()) continue;
    EXPECT_LE(t.a + t.b, t.n + 2);
    EXPECT_EQ((t.a + t.b) % 2, t.n % 2) << "n=" << t.n;
  }
}

TEST(MagneticWellSymbol, FiberEigenvaluesFollowBranchFormula) {
  const auto spec = curved_well();
  const auto sym = magnetic_well_symbol(spec);
  const FockLadder ladder(40, 8);
  for (double x : {0.0, 0.4, -0.8})
    for (double xi : {0.0, 0.5}) {
      FiberPolynomialSymbol p0 = sym;
      p0.order = 0;
      const Matrix m = p0.evaluate(x, xi, 1.0, ladder);
      Eigen::SelfAdjointEigenSolver<Matrix> es(m);
      for (int p = 1; p <= 3; ++p)
        EXPECT_NEAR(es.eigenvalues()(p - 1), magnetic_fiber_eigenvalue(spec, p, x, xi), 1e-6);
      // band gap to the next branch is 2B >= 2 b0
      EXPECT_GE(es.eigenvalues()(1) - es.eigenvalues()(0), 2 * spec.b0 - 1e-6);
    }
}

TEST(MagneticWellSymbol, HalfOrderTermIsOddSoGroundStateAverageVanishes) {
  const auto g = PhaseSpaceGrid::clamped(-1, 1, -1, 1, 10, 10, 0, 2);
  const FockLadder ladder(12);
  const auto H = magnetic_well_symbol(curved_well()).to_formal_symbol(g, ladder);
  const MatrixField h_half = H.coeff(1);
  for (std::size_t k = 0; k < h_half.nodes(); ++k) EXPECT_LT(std::abs(h_half.node(k)(0, 0)), 1e-14);
  EXPECT_GT(sup_norm(h_half), 1e-3);
}

TEST(MagneticWellSymbol, TaylorOrderCapped) {
  auto spec = curved_well();
  spec.J = kMaxMagneticTaylorOrder + 1;
  EXPECT_THROW(magnetic_well_symbol(spec), std::invalid_argument);
}

TEST(MagneticWell, MinimumAndFieldBound) {
  auto spec = curved_well();
  spec.V_dot = Poly2::monomial(1, 0, -0.1);  // shifts the minimum of B + V to s1 = 0.2
  const auto g = PhaseSpaceGrid::clamped(-2, 2, -2, 2, 40, 40, 0, 2);
  const auto m = check_magnetic_well(spec, g);
  EXPECT_NEAR(m.mu0, 0.99, 1e-12);
  // s = (xi2, x2): the shifted coordinate is xi2
  EXPECT_NEAR(m.xi, 0.2, 1e-10);
  EXPECT_NEAR(m.x, 0.0, 1e-10);
  spec.b0 = 1.5;
  EXPECT_THROW(check_magnetic_well(spec, g), std::invalid_argument);
}

TEST(MagneticWell, DoubleWellRejected) {
  MagneticWellSpec spec;
  spec.V_dot = Poly2::monomial(0, 4, 1.0) + Poly2::monomial(0, 2, -1.0) + Poly2::monomial(2, 0, 1.0);
  const auto g = PhaseSpaceGrid::clamped(-2, 2, -2, 2, 40, 40, 0, 2);
  EXPECT_THROW(check_magnetic_well(spec, g), std::invalid_argument);
}

TEST(DeGennes, NeumannParityAnchors) {
  const auto r = degennes_eigen({0.0, 0.0, 0.0, 400}, 2);
  EXPECT_NEAR(r.values[0], 1.0, 1e-6);
  EXPECT_NEAR(r.values[1], 5.0, 1e-6);
}

TEST(DeGennes, DirichletParityAnchors) {
  const auto r = degennes_eigen({kDirichlet, 0.0, 0.0, 400}, 2);
  EXPECT_NEAR(r.values[0], 3.0, 1e-6);
  EXPECT_NEAR(r.values[1], 7.0, 1e-6);
}

TEST(DeGennes, EigenfunctionsNormalizedAndRobinOrdered) {
  const auto r = degennes_eigen({1.0, 0.5, 0.0, 400}, 3, true);
  ASSERT_EQ(r.functions.size(), 3u);
  for (const auto& f : r.functions) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
      s += 0.5 * (f[i] * f[i] + f[i + 1] * f[i + 1]) * (r.t[i + 1] - r.t[i]);
    EXPECT_NEAR(s, 1.0, 1e-3);
  }
  EXPECT_LT(r.values[0], r.values[1]);
  EXPECT_LT(r.values[1], r.values[2]);
  // Robin data sits between Neumann and Dirichlet
  const double neu = degennes_eigen({0.0, 0.5, 0.0, 400}, 1).values[0];
  const double dir = degennes_eigen({kDirichlet, 0.5, 0.0, 400}, 1).values[0];
  EXPECT_GT(r.values[0], neu);
  EXPECT_LT(r.values[0], dir);
}

TEST(DeGennes, PreconditionsEnforced) {
  EXPECT_THROW(degennes_eigen({0.0, 0.0, 5.0, 400}, 1), std::invalid_argument);
  EXPECT_THROW(degennes_eigen({0.0, 0.0, 0.0, 100}, 1), std::invalid_argument);
  EXPECT_THROW(degennes_eigen({-1.0, 0.0, 0.0, 400}, 1), std::invalid_argument);
}

TEST(DeGennes, MatchesShootingOracle) {
  for (double gamma : {0.0, 1.0})
    for (double sigma : {-1.0, 0.7, 2.0})
      EXPECT_NEAR(degennes_eigen({gamma, sigma, 0.0, 400}, 1).values[0],
                  ground_by_shooting(gamma, sigma), 1e-6)
          << gamma << " " << sigma;
}

TEST(Dispersion, NeumannGroundMinimum) {
  const auto m = dispersion_minimum(0.0, 1);
  EXPECT_NEAR(m.theta, theta0_oracle(), 1e-6);
  EXPECT_NEAR(m.theta, 0.590106, 1e-4);
  EXPECT_NEAR(m.sigma_star, 0.7681, 1e-3);
  EXPECT_GT(m.curvature, 0.0);
}

TEST(Dispersion, MinimaInsideLandauIntervals) {
  for (double gamma : {0.0, 1.0})
    for (int n : {1, 2}) {
      const auto m = dispersion_minimum(gamma, n);
      EXPECT_GT(m.theta, 2 * n - 3);
      EXPECT_LT(m.theta, 2 * n - 1);
    }
}

TEST(Dispersion, DirichletCurveHasNoInteriorMinimum) {
  // mu_1(inf, sigma) decreases to 1 without attaining it
  EXPECT_THROW(dispersion_minimum(kDirichlet, 1), ConvergenceError);
  double prev = 1e9;
  for (double s : {-2.0, 0.0, 2.0, 4.0}) {
    const double v = degennes_eigen({kDirichlet, s, 0.0, 400}, 1).values[0];
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 1.0);
    prev = v;
  }
}

TEST(Dispersion, StrictlyIncreasingInLevel) {
  for (double gamma : {0.0, 1.0, kDirichlet})
    for (double s : {-1.0, 0.5, 3.0}) {
      const auto v = degennes_eigen({gamma, s, 0.0, 400}, 4).values;
      for (int k = 0; k + 1 < 4; ++k) EXPECT_LT(v[k], v[k + 1]);
    }
}

TEST(CountBands, CaseSplit) {
  EXPECT_EQ(count_bands(0.0, 0.8, 0.95), 1);
  EXPECT_EQ(count_bands(0.0, 0.1, 0.3), 0);
  const double theta1 = dispersion_minimum(0.0, 2).theta;
  EXPECT_EQ(count_bands(0.0, 2.2, 2.8), 2.8 >= theta1 ? 2 : 1);
  EXPECT_EQ(count_bands(0.0, 1.2, 1.5), 1);
  EXPECT_THROW(count_bands(0.0, 0.5, 1.5), std::invalid_argument);
}

TEST(DispersionTable, RowsCoverGrid) {
  const auto rows = dispersion_table({0.0, kDirichlet}, 2, {0.0, 1.0});
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_NEAR(rows[0].mu, 1.0, 1e-6);
}
