#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "adiaband/factorization.hpp"
#include "adiaband/magnetic_well.hpp"
#include "adiaband/test_models.hpp"

using namespace adiaband;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<double> kSweep = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625,
                                    0.001953125};

MagneticWellSpec curved_well() {
  MagneticWellSpec spec;
  spec.B_dot = Poly2::constant(1.0) + Poly2::monomial(2, 0, 0.25) + Poly2::monomial(0, 2, 0.25);
  return spec;
}

double max_term_diff(const FormalSymbol& a, const FormalSymbol& b, int order) {
  double worst = 0.0;
  for (int n = 0; n <= order; ++n) worst = std::max(worst, sup_norm(a.coeff(n) - b.coeff(n)));
  return worst;
}

}  // namespace

TEST(BuildU0, ConstantProjectorGivesFirstBasisVector) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 16, 16, 4);
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  const auto u = build_u0(MatrixField::constant(g, p));
  Matrix e1 = Matrix::Zero(3, 1);
  e1(0, 0) = 1.0;
  EXPECT_LT(sup_norm(u - MatrixField::constant(g, e1)), 1e-14);
}

TEST(BuildU0, RotatingFamilyClosedForm) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 32, 32, 4);
  auto vec = [](double x, double xi) {
    const double th = 0.3 * std::sin(x) * std::cos(xi);
    Matrix v(2, 1);
    v << std::cos(th / 2), std::sin(th / 2);
    return v;
  };
  const auto pi0 = MatrixField::from_function(g, 2, 2, [&](double x, double xi) {
    const Matrix v = vec(x, xi);
    return Matrix(v * v.adjoint());
  });
  const auto u = build_u0(pi0);
  EXPECT_LT(sup_norm(u - MatrixField::from_function(g, 2, 1, vec)), 1e-9);
}

TEST(BuildU0, ComplexPhaseIsRemovedSmoothly) {
  const auto g = PhaseSpaceGrid::clamped(-1, 1, -1, 1, 16, 16, 0, 4);
  const auto pi0 = MatrixField::from_function(g, 2, 2, [](double x, double xi) {
    Matrix v(2, 1);
    v << 0.8, 0.6 * std::exp(Complex(0, x + 2 * xi));
    return Matrix(v * v.adjoint());
  });
  const auto u = build_u0(pi0);
  for (std::size_t k = 0; k < u.nodes(); ++k) {
    EXPECT_NEAR(u.node(k)(0, 0).real(), 0.8, 1e-12);
    EXPECT_NEAR(u.node(k)(0, 0).imag(), 0.0, 1e-12);
    EXPECT_NEAR(u.node(k).norm(), 1.0, 1e-12);
  }
}

TEST(BuildU0, RankTwoRejected) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 16, 16, 4);
  EXPECT_THROW(build_u0(MatrixField::identity(g, 2)), std::invalid_argument);
}

TEST(BuildU0, ChernBandHasGaugeObstruction) {
  // lower band of sin x sx + sin xi sy + (1 + cos x + cos xi) sz carries a nonzero Chern number
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 24, 24, 4);
  const auto H0 = MatrixField::from_function(g, 2, 2, [](double x, double xi) {
    const double mz = 1.0 + std::cos(x) + std::cos(xi);
    Matrix m(2, 2);
    m << mz, Complex(std::sin(x), -std::sin(xi)), Complex(std::sin(x), std::sin(xi)), -mz;
    return m;
  });
  const auto pi0 = build_pi0(H0, GapSpec::bands(0, 0, 0.2));
  EXPECT_THROW(build_u0(pi0), GaugeObstruction);
}

TEST(Factors, ConstantSymbolHasNoCorrections) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 16, 16, 4);
  Matrix h0(2, 2);
  h0 << 1, 0.3, 0.3, 4;
  const auto H = constant_model(g, h0, 3);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 1.0), 3);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 3);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_LT(sup_norm(pair.L.coeff(n)), 1e-14);
    EXPECT_LT(sup_norm(pair.ell.coeff(n)), 1e-14);
  }
  const double mu = 2.5 - std::sqrt(1.5 * 1.5 + 0.09);
  const auto M = build_effective(H, pair, 3);
  EXPECT_LT(sup_norm(M.coeff(0) - MatrixField::constant(g, Matrix::Constant(1, 1, mu))), 1e-13);
  for (int n = 1; n <= 3; ++n) EXPECT_LT(sup_norm(M.coeff(n)), 1e-13);
}

TEST(Factors, OrderZeroIdentitiesAreExact) {
  const auto g = PhaseSpaceGrid::periodic(-2 * kPi, 2 * kPi, -2 * kPi, 2 * kPi, 64, 64, 8);
  const auto hier = build_hierarchy(two_level_model(g, 1), GapSpec::window(0, 2, 1.0), 0);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 0);
  const MatrixField l0 = pair.L.coeff(0), e0 = pair.ell.coeff(0);
  EXPECT_LT(sup_norm(multiply(l0, e0.adjoint()) - MatrixField::identity(g, 1)), 1e-14);
  EXPECT_LT(sup_norm(multiply(e0.adjoint(), l0) - hier.pi0()), 1e-14);
}

TEST(Factors, SelfadjointMagneticModelGivesEqualFactors) {
  const auto g = PhaseSpaceGrid::clamped(-1, 1, -1, 1, 40, 40, 4, 8);
  const FockLadder ladder(32, 8);
  const auto H = magnetic_well_symbol(curved_well()).to_formal_symbol(g, ladder);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 1.0), 2);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 2);
  EXPECT_LT(max_term_diff(pair.L, pair.ell, 2), 1e-9);
  // the squeezed ground state stays even in the Fock basis
  for (std::size_t k = 0; k < pair.u0.nodes(); ++k)
    for (int r = 1; r < 32; r += 2) EXPECT_LT(std::abs(pair.u0.node(k)(r, 0)), 1e-10);
}

TEST(Factors, RemarkIdentityForXiOnlyModel) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 32, 32, 8);
  const auto H = xi_only_model(g, 1);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 0.5), 1);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 1);
  const MatrixField s = multiply(pair.L.coeff(1), pair.ell.coeff(0).adjoint()) +
                        multiply(pair.L.coeff(0), pair.ell.coeff(1).adjoint());
  EXPECT_LT(sup_norm(s), 1e-8);
}

TEST(Factors, SlopesOnTwoLevelModel) {
  const auto g = PhaseSpaceGrid::periodic(-2 * kPi, 2 * kPi, -2 * kPi, 2 * kPi, 128, 128, 8);
  const auto hier = build_hierarchy(two_level_model(g, 2), GapSpec::window(0, 2, 1.0), 2);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 2);
  for (double c : pair.compat) EXPECT_LE(c, 1e-8);
  const auto check = verify_factorization(pair, hier, kSweep);
  EXPECT_TRUE(slope_at_least(check.left_fit, 2.8)) << check.left_fit.slope;
  EXPECT_TRUE(slope_at_least(check.right_fit, 2.8)) << check.right_fit.slope;
}

TEST(Factors, GaugeChoiceLeavesProjectorReconstructionInvariant) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 128, 128, 8);
  FormalSymbol H(g, 2, 2, 1, 2);
  H.set(0, MatrixField::from_function(g, 2, 2, [](double x, double xi) {
    Matrix m(2, 2);
    m << std::sin(x), Complex(0.3, 0.2 * std::cos(xi)), Complex(0.3, -0.2 * std::cos(xi)),
        2.0 + std::cos(xi);
    return m;
  }));
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 0.5), 2);
  const auto u0 = build_u0(hier.pi0());
  const auto a = build_factors(hier, u0, 2, GaugeSplit::equal);
  const auto b = build_factors(hier, u0, 2, GaugeSplit::left_only);
  EXPECT_GT(max_term_diff(a.L, b.L, 2), 1e-6);  // the factors themselves differ
  const auto pa = moyal_product(a.ell.adjoint(), a.L, 2);
  const auto pb = moyal_product(b.ell.adjoint(), b.L, 2);
  EXPECT_LT(max_term_diff(pa, pb, 2), 1e-8);
  EXPECT_LT(max_term_diff(pa, hier.pi, 2), 1e-7);  // stencil-limited
}

TEST(Effective, MagneticModelPrincipalTermIsFiberEigenvalue) {
  const auto g = PhaseSpaceGrid::clamped(-1, 1, -1, 1, 40, 40, 4, 8);
  const auto spec = curved_well();
  const FockLadder ladder(32, 8);
  const auto H = magnetic_well_symbol(spec).to_formal_symbol(g, ladder);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 1.0), 2);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 2);
  const auto M = build_effective(H, pair, 2);
  const auto mu1 = MatrixField::from_function(g, 1, 1, [&](double x, double xi) {
    return Matrix::Constant(1, 1, magnetic_fiber_eigenvalue(spec, 1, x, xi));
  });
  EXPECT_LT(sup_norm(M.coeff(0) - mu1), 1e-10);
  // parity: the sqrt(h) term of the effective symbol vanishes
  EXPECT_LT(sup_norm(M.coeff(1)), 1e-10);
}

TEST(Effective, XiOnlyOrderOneIsQuadraticForm) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 32, 32, 8);
  const auto H = xi_only_model(g, 1);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 0.5), 1);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 1);
  const auto M = build_effective(H, pair, 1);
  // direct inner product with the lowest eigenvector of H0
  MatrixField want(g, 1, 1);
  for (std::size_t k = 0; k < want.nodes(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(H.coeff(0).node(k)));
    const Vector v = es.eigenvectors().col(0);
    want.node(k)(0, 0) = v.dot(Matrix(H.coeff(1).node(k)) * v);
  }
  EXPECT_LT(sup_norm(M.coeff(1) - want), 1e-8);
  EXPECT_LT(sup_norm(M.coeff(0) - M.coeff(0).adjoint()), 1e-14);
}

TEST(Effective, OrderBeyondFactorsRejected) {
  const auto g = PhaseSpaceGrid::periodic(-kPi, kPi, -kPi, kPi, 16, 16, 4);
  const auto H = xi_only_model(g, 2);
  const auto hier = build_hierarchy(H, GapSpec::bands(0, 0, 0.5), 1);
  const auto pair = build_factors(hier, build_u0(hier.pi0()), 1);
  EXPECT_THROW(build_effective(H, pair, 2), std::invalid_argument);
}
