#include "adiaband/factorization.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <string>

namespace adiaband {

namespace {

Complex unit_phase(Complex z) { return z / std::abs(z); }

void check_periodic_winding(const MatrixField& u) {
  const auto& g = u.grid();
  for (int i = 0; i < g.n_x; ++i)
    for (int j = 0; j < g.n_xi; ++j) {
      const int nbr[2][2] = {{(i + 1) % g.n_x, j}, {i, (j + 1) % g.n_xi}};
      for (const auto& nb : nbr) {
        const Complex ov = (u.at(i, j).adjoint() * u.at(nb[0], nb[1]))(0, 0);
        if (std::abs(std::arg(ov)) > std::numbers::pi / 4)
          throw GaugeObstruction("no smooth phase for u0: neighbour overlap phase " +
                                 std::to_string(std::arg(ov)) + " at node (x=" +
                                 std::to_string(g.x(i)) + ", xi=" + std::to_string(g.xi(j)) +
                                 ")");
      }
    }
}

}  // namespace

MatrixField build_u0(const MatrixField& pi0) {
  if (pi0.rows() != pi0.cols()) throw std::invalid_argument("build_u0: Pi0 must be square");
  const auto& g = pi0.grid();
  const int m = pi0.rows();
  MatrixField u(g, m, 1);
  std::vector<int> bad(g.nodes(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(g.nodes()); ++k) {
    const Matrix p = pi0.node(k);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.adjoint()));
    const auto& ev = es.eigenvalues();
    if (std::abs(ev(m - 1) - 1.0) > 1e-8 || (m > 1 && std::abs(ev(m - 2)) > 1e-8)) bad[k] = 1;
    u.node(k) = es.eigenvectors().col(m - 1);
  }
  for (std::size_t k = 0; k < g.nodes(); ++k)
    if (bad[k])
      throw std::invalid_argument("build_u0: Pi0 is not a rank-one projector at node (x=" +
                                  std::to_string(g.x(g.ix(k))) + ", xi=" +
                                  std::to_string(g.xi(g.ixi(k))) + ")");

  const std::size_t ref = g.index(g.n_x / 2, g.n_xi / 2);
  Eigen::Index cstar = 0;
  u.node(ref).col(0).cwiseAbs().maxCoeff(&cstar);
  double floor = 1.0;
  for (std::size_t k = 0; k < g.nodes(); ++k) floor = std::min(floor, std::abs(u.node(k)(cstar, 0)));

  if (floor >= 1e-3) {
    for (std::size_t k = 0; k < g.nodes(); ++k)
      u.node(k) *= std::conj(unit_phase(u.node(k)(cstar, 0)));
  } else {
    // Breadth-first phase transport from the reference node.
    u.node(ref) *= std::conj(unit_phase(u.node(ref)(cstar, 0)));
    std::vector<char> seen(g.nodes(), 0);
    std::deque<std::size_t> queue{ref};
    seen[ref] = 1;
    const bool per = g.boundary == Boundary::periodic;
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      const int i = g.ix(k), j = g.ixi(k);
      const int steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& s : steps) {
        int ii = i + s[0], jj = j + s[1];
        if (per) {
          ii = (ii + g.n_x) % g.n_x;
          jj = (jj + g.n_xi) % g.n_xi;
        } else if (ii < 0 || jj < 0 || ii >= g.n_x || jj >= g.n_xi) {
          continue;
        }
        const std::size_t nb = g.index(ii, jj);
        if (seen[nb]) continue;
        const Complex ov = (u.node(nb).adjoint() * u.node(k))(0, 0);
        if (std::abs(ov) < 1e-12) throw GaugeObstruction("build_u0: neighbour overlap vanishes");
        u.node(nb) *= unit_phase(ov);
        seen[nb] = 1;
        queue.push_back(nb);
      }
    }
  }
  if (g.boundary == Boundary::periodic) check_periodic_winding(u);
  return u;
}

FactorPair build_factors(const ProjectorHierarchy& hier, const MatrixField& u0, int order,
                         GaugeSplit gauge, double compat_tol) {
  if (hier.rank != 1) throw std::invalid_argument("build_factors: Pi0 must have rank one");
  if (order > hier.order())
    throw std::invalid_argument("build_factors: hierarchy built only to order " +
                                std::to_string(hier.order()));
  if (u0.cols() != 1 || u0.rows() != hier.pi.rows())
    throw std::invalid_argument("build_factors: u0 has the wrong shape");
  const auto& g = hier.pi.grid();
  const int m = hier.pi.rows();
  const int q0 = hier.pi.q0();

  FactorPair f;
  f.u0 = u0;
  f.gauge = gauge;
  const MatrixField row0 = u0.adjoint();
  f.L = FormalSymbol(g, 1, m, q0, order);
  f.ell = FormalSymbol(g, 1, m, q0, order);
  f.L.set(0, row0);
  f.ell.set(0, row0);

  const MatrixField pi0 = hier.pi.coeff(0);
  const MatrixField pperp = MatrixField::identity(g, m) - pi0;
  const FormalSymbol pistar = hier.pi.adjoint();

  for (int k = 0; k < order; ++k) {
    const int n = k + 1;
    const FormalSymbol Pk = hier.pi.truncated(k);
    const FormalSymbol Psk = pistar.truncated(k);
    const MatrixField W = moyal_coefficient(f.L, f.ell.adjoint(), n);  // 1 x 1
    MatrixField U = moyal_coefficient(f.L, Pk, n);
    U *= -1.0;
    MatrixField V = moyal_coefficient(f.ell, Psk, n);
    V *= -1.0;

    const MatrixField aL = multiply(row0, hier.pi.coeff(n)) - U;
    const MatrixField aE = multiply(row0, pistar.coeff(n)) - V;
    const double res = std::max(sup_norm(multiply(aL, pi0)), sup_norm(multiply(aE, pi0)));
    f.compat.push_back(res);
    f.w_norms.push_back(sup_norm(W));
    const double scale = std::max({1.0, sup_norm(aL), sup_norm(aE)});
    if (res > compat_tol * scale)
      throw CompatibilityError("factor compatibility fails at lattice order " + std::to_string(n) +
                               ": residual " + std::to_string(res));

    MatrixField Ln = multiply(aL, pperp);
    MatrixField En = multiply(aE, pperp);
    for (std::size_t q = 0; q < g.nodes(); ++q) {
      const Complex w = W.node(q)(0, 0);
      const Complex alpha = gauge == GaugeSplit::equal ? -0.5 * w : -w;
      const Complex beta_bar = gauge == GaugeSplit::equal ? -0.5 * w : Complex(0.0, 0.0);
      Ln.node(q) += alpha * row0.node(q);
      En.node(q) += std::conj(beta_bar) * row0.node(q);
    }
    f.L.set(n, std::move(Ln));
    f.ell.set(n, std::move(En));
  }
  return f;
}

FactorizationCheck verify_factorization(const FactorPair& pair, const ProjectorHierarchy& hier,
                                        const std::vector<double>& h_values, int extra) {
  require_sweep(h_values, 0.0, "verify_factorization");
  const int K = pair.L.order();
  const int q0 = pair.L.q0();
  const int top = K + (extra < 0 ? 2 * q0 : extra);
  const auto& g = pair.L.grid();
  const FormalSymbol ellstar = pair.ell.adjoint();

  FormalSymbol one(g, 1, 1, q0, top);
  one.set(0, MatrixField::identity(g, 1));
  const FormalSymbol left = moyal_product(pair.L, ellstar, top) - one;
  const FormalSymbol right =
      moyal_product(ellstar, pair.L, top) - hier.pi.truncated(K).with_order(top);

  FactorizationCheck c;
  c.h = h_values;
  std::vector<double> t;
  for (double h : h_values) {
    c.left.push_back(sup_norm(left.evaluate(h)));
    c.right.push_back(sup_norm(right.evaluate(h)));
    t.push_back(std::pow(h, 1.0 / q0));
  }
  c.left_fit = fit_slope(t, c.left);
  c.right_fit = fit_slope(t, c.right);
  c.left_fit.h = c.right_fit.h = h_values;
  return c;
}

FormalSymbol build_effective(const FormalSymbol& H, const FactorPair& pair, int order) {
  if (order > pair.L.order())
    throw std::invalid_argument("build_effective: factors built only to order " +
                                std::to_string(pair.L.order()));
  if (order > H.order())
    throw std::invalid_argument("build_effective: symbol known only to order " +
                                std::to_string(H.order()));
  const FormalSymbol LH = moyal_product(pair.L.truncated(order), H.truncated(order), order);
  return moyal_product(LH, pair.ell.truncated(order).adjoint(), order);
}

}  // namespace adiaband
