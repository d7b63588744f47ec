#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adiaband/harness.hpp"

using namespace adiaband;

namespace {

Matrix random_hermitian(std::mt19937& rng, int n) {
  std::normal_distribution<double> nd;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  return 0.5 * (a + a.adjoint());
}

MagneticWellSpec curved_well() {
  MagneticWellSpec spec;
  spec.B_dot = Poly2::constant(1.0) + Poly2::monomial(2, 0, 0.25) + Poly2::monomial(0, 2, 0.25);
  return spec;
}

}  // namespace

TEST(SlopeFit, ExactPowerLaws) {
  const std::vector<double> h = {0.1, 0.05, 0.02, 0.01, 0.005};
  std::vector<double> d1, d3;
  for (double x : h) {
    d1.push_back(2.5 * x);
    d3.push_back(0.3 * x * x * x);
  }
  const auto f1 = fit_slope(h, d1);
  EXPECT_NEAR(f1.slope, 1.0, 1e-12);
  EXPECT_NEAR(std::exp(f1.intercept), 2.5, 1e-10);
  EXPECT_NEAR(f1.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit_slope(h, d3).slope, 3.0, 1e-12);
}

TEST(SlopeFit, FloorPointsExcludedAndFlagged) {
  const std::vector<double> h = {0.1, 0.05, 0.02, 0.01, 0.005};
  const std::vector<double> d = {1e-2, 2.5e-3, 4e-4, 1e-14, 0.0};
  const auto f = fit_slope(h, d);
  EXPECT_EQ(f.used, 3);
  EXPECT_TRUE(f.saturated[3]);
  EXPECT_TRUE(f.saturated[4]);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_TRUE(slope_at_least(f, 1.8));
}

TEST(SlopeFit, AllSaturatedIsReportedNotFailed) {
  const std::vector<double> h = {0.1, 0.05, 0.02, 0.01, 0.005};
  const auto f = fit_slope(h, std::vector<double>(5, 1e-16));
  EXPECT_TRUE(f.all_saturated);
  EXPECT_FALSE(f.valid);
  EXPECT_TRUE(slope_at_least(f, 3.0));
}

TEST(SlopeFit, SweepRequirements) {
  EXPECT_THROW(require_sweep(std::vector<double>{0.1, 0.01, 0.001}, 0.0, "t"), std::invalid_argument);
  EXPECT_THROW(require_sweep(std::vector<double>{0.1, 0.09, 0.08, 0.07, 0.06}, 2.0, "t"),
               std::invalid_argument);
  EXPECT_NO_THROW(require_sweep(std::vector<double>{1, 0.3, 0.1, 0.03, 0.01}, 2.0, "t"));
}

TEST(CompareSpectra, PairsBySortedOrderAndFlagsCountMismatch) {
  const std::vector<double> h = {0.1, 0.05};
  const auto r = compare_spectra(h, {{3.0, 1.0, 2.0}, {1.0, 2.0}}, {{1.1, 2.1}, {2.01, 1.01}});
  EXPECT_TRUE(r.count_mismatch);
  EXPECT_EQ(r.pairs, 2);
  EXPECT_NEAR(r.rows[0].diff[0], 0.1, 1e-14);
  EXPECT_NEAR(r.max_diff[1], 0.01, 1e-14);
  EXPECT_THROW(compare_spectra({0.1}, {}, {}), std::invalid_argument);
}

TEST(CompareSpectra, FlatFieldFullMatchesEffective) {
  MagneticWellSpec spec;
  const auto sym = magnetic_well_symbol(spec);
  const FockLadder ladder(6);
  const auto g = PhaseSpaceGrid::clamped(-3, 3, -3, 3, 24, 24, 2, 4);
  const auto H = sym.to_formal_symbol(g, ladder);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 1.0), 2);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 2);
  const auto M = build_effective(H, pair, 2);
  std::vector<double> hs = {0.04, 0.02};
  std::vector<std::vector<double>> full, eff;
  for (double h : hs) {
    const auto base = centered_base(1.0, 16);
    const auto fs = spectrum(quantize_fiber_model(sym, ladder, base, h), 0, 2);
    const auto es = spectrum(quantize_formal_symbol(M, base, h), 0, 2);
    full.emplace_back(fs.values.data(), fs.values.data() + fs.values.size());
    eff.emplace_back(es.values.data(), es.values.data() + es.values.size());
  }
  const auto r = compare_spectra(hs, full, eff);
  EXPECT_FALSE(r.count_mismatch);
  EXPECT_EQ(r.pairs, 16);
  for (double d : r.max_diff) EXPECT_LT(d, 1e-12);
}

TEST(Quasimode, ExactEigenpairHasTinyResidual) {
  std::mt19937 rng(5);
  const Matrix A = random_hermitian(rng, 12);
  const auto s = spectrum(A, -100, 100, true);
  for (int k = 0; k < 12; ++k)
    EXPECT_LE(quasimode_residual(A, s.vectors.col(k), s.values(k)), 1e-10 * A.norm());
  EXPECT_THROW(quasimode_residual(A, Vector::Zero(12), 0.0), std::invalid_argument);
}

TEST(FunctionalCalculus, ExactSpectralProjectorCommutes) {
  std::mt19937 rng(9);
  const Matrix A = random_hermitian(rng, 30);
  const auto s = spectrum(A, -100, 100, true);
  const Matrix V = s.vectors.leftCols(10);
  const Matrix Pi = V * V.adjoint();
  const BumpProfile chi{s.values(0) - 1.0, s.values(12)};
  const auto n = functional_calculus_norms(A, Pi, chi);
  EXPECT_LE(n.commutator, 1e-12);
  EXPECT_GT(n.rank, 0);
}

TEST(FunctionalCalculus, CommutatorNormMatchesDenseOracle) {
  std::mt19937 rng(13);
  const Matrix A = random_hermitian(rng, 24);
  std::normal_distribution<double> nd;
  Matrix Pi(24, 24);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) Pi(i, j) = Complex(nd(rng), nd(rng)) * 0.1;
  const BumpProfile chi{-3.0, 1.0};
  const auto s = spectrum(A, -100, 100, true);
  RealVector c(24);
  for (int k = 0; k < 24; ++k) c(k) = chi(s.values(k));
  const Matrix X = s.vectors * c.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  const auto n = functional_calculus_norms(A, Pi, chi);
  EXPECT_NEAR(n.commutator, operator_norm(X * Pi - Pi * X), 1e-10);
  EXPECT_NEAR(n.range, operator_norm(Pi * X - X), 1e-10);
}

TEST(FunctionalCalculus, IdentityProfileGivesZeroCommutator) {
  std::mt19937 rng(17);
  const Matrix A = random_hermitian(rng, 16);
  const auto s = spectrum(A, -100, 100);
  // bump that is flat to rounding on the whole spectrum: chi(H) is a multiple of Id
  const double lo = s.values(0) - 1e4, hi = s.values(15) + 1e4;
  Matrix Pi = Matrix::Zero(16, 16);
  Pi(0, 3) = 1.0;
  const auto n = functional_calculus_norms(A, Pi, BumpProfile{lo, hi});
  EXPECT_LE(n.commutator, 1e-6);
}

TEST(Bump, SmoothCompactSupport) {
  const BumpProfile b{0.0, 2.0};
  EXPECT_DOUBLE_EQ(b(1.0), 1.0);
  EXPECT_EQ(b(0.0), 0.0);
  EXPECT_EQ(b(2.5), 0.0);
  EXPECT_LT(b(1.99), 1e-20);
}

TEST(MagneticWellRunSmall, LowestRatioApproachesOne) {
  MagneticWellRun run;
  run.spec = curved_well();
  run.m = 8;
  run.base_n = 64;
  run.box_factor = 10.0;  // base box and its xi reach stay inside the symbol grid at h = 0.08
  run.symbol_grid = PhaseSpaceGrid::clamped(-4, 4, -4, 4, 80, 80, 4, 8);
  run.h_values = {0.08, 0.06, 0.045, 0.034, 0.025};
  const auto res = run_magnetic_well(run);
  EXPECT_NEAR(res.minimum.mu0, 1.0, 1e-12);
  for (const auto& p : res.points) {
    EXPECT_GT(p.lowest, 1.0);
    EXPECT_LT(p.lowest - 1.0, 1.2 * p.h);
  }
  for (std::size_t k = 1; k < res.points.size(); ++k)
    EXPECT_LT(res.points[k].lowest, res.points[k - 1].lowest);
  for (double c : res.comp_log) EXPECT_LE(c, 1e-8);
  EXPECT_FALSE(res.spectra.count_mismatch);
  EXPECT_GT(res.spectra.fit.slope, 2.3);
}
