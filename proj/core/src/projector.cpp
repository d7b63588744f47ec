#include "adiaband/projector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace adiaband {

GapSpec GapSpec::window(double lo, double hi, double delta) {
  if (!(hi >= lo)) throw std::invalid_argument("GapSpec: empty window");
  if (!(delta > 0.0)) throw std::invalid_argument("GapSpec: delta must be positive");
  GapSpec g;
  g.mode = Mode::window;
  g.lo = lo;
  g.hi = hi;
  g.delta = delta;
  return g;
}

GapSpec GapSpec::bands(int first, int last, double delta) {
  if (first < 0 || last < first) throw std::invalid_argument("GapSpec: bad band range");
  if (!(delta > 0.0)) throw std::invalid_argument("GapSpec: delta must be positive");
  GapSpec g;
  g.mode = Mode::bands;
  g.first = first;
  g.last = last;
  g.delta = delta;
  return g;
}

namespace {

enum SplitStatus { kOk = 0, kNotHermitian, kGap, kEmpty, kRank };

int split_node(const Eigen::Ref<const Matrix>& h, const GapSpec& gap, NodeSplit& out) {
  if (!is_hermitian(h)) return kNotHermitian;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  const int m = static_cast<int>(out.values.size());
  int first = 0, last = -1;
  if (gap.mode == GapSpec::Mode::window) {
    first = m;
    for (int i = 0; i < m; ++i)
      if (out.values(i) >= gap.lo && out.values(i) <= gap.hi) {
        first = std::min(first, i);
        last = i;
      }
    if (last < first) return kEmpty;
  } else {
    if (gap.last >= m) return kEmpty;
    first = gap.first;
    last = gap.last;
  }
  out.first = first;
  out.count = last - first + 1;
  if (first > 0 && out.values(first) - out.values(first - 1) < gap.delta) return kGap;
  if (last + 1 < m && out.values(last + 1) - out.values(last) < gap.delta) return kGap;
  return kOk;
}

Matrix selected_projector(const NodeSplit& s) {
  const auto v = s.vectors.middleCols(s.first, s.count);
  return v * v.adjoint();
}

}  // namespace

std::vector<NodeSplit> split_fibers(const MatrixField& H0, const GapSpec& gap) {
  if (H0.rows() != H0.cols()) throw std::invalid_argument("split_fibers: H0 must be square");
  const auto& g = H0.grid();
  const std::size_t n = H0.nodes();
  std::vector<NodeSplit> out(n);
  std::vector<int> status(n, kOk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
    status[k] = split_node(H0.node(k), gap, out[k]);

  for (std::size_t k = 0; k < n; ++k) {
    if (status[k] == kOk && out[k].count != out[0].count) status[k] = kRank;
    if (status[k] == kOk) continue;
    const double x = g.x(g.ix(k)), xi = g.xi(g.ixi(k));
    const std::string at = " at node (x=" + std::to_string(x) + ", xi=" + std::to_string(xi) + ")";
    switch (status[k]) {
      case kNotHermitian:
        throw std::invalid_argument("H0 is not Hermitian" + at);
      case kEmpty:
        throw GapViolation("no eigenvalue selected" + at, x, xi);
      case kRank:
        throw GapViolation("rank of the selected subset changes" + at, x, xi);
      default:
        throw GapViolation("spectral gap below delta=" + std::to_string(gap.delta) + at, x, xi);
    }
  }
  return out;
}

MatrixField build_pi0(const MatrixField& H0, const GapSpec& gap) {
  const auto split = split_fibers(H0, gap);
  MatrixField pi(H0.grid(), H0.rows(), H0.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(split.size()); ++k)
    pi.node(k) = selected_projector(split[k]);
  return pi;
}

namespace {

// Solves [H0, Q] = -S on the off-diagonal blocks (Pi0 . Pi0perp and
// Pi0perp . Pi0) at one node.
Matrix offdiagonal_solve(const NodeSplit& s, const Matrix& H0, const Matrix& S, double delta,
                         const HierarchyOptions& opt) {
  const Eigen::Index m = s.values.size();
  if (opt.solver == NodeSolver::basis) {
    Matrix st = s.vectors.adjoint() * S * s.vectors;
    Matrix q = Matrix::Zero(m, m);
    auto sel = [&](Eigen::Index i) { return i >= s.first && i < s.first + s.count; };
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (sel(i) != sel(j)) q(i, j) = -st(i, j) / (s.values(i) - s.values(j));
    return s.vectors * q * s.vectors.adjoint();
  }

  const Matrix P0 = selected_projector(s);
  const Matrix Pp = Matrix::Identity(m, m) - P0;
  const double sel_lo = s.values(s.first), sel_hi = s.values(s.first + s.count - 1);
  const double span = s.values(m - 1) - s.values(0);
  // c sits inside the selected cluster, c' far above everything: the spurious
  // blocks of the full-space problem then vanish and the contour stays valid.
  const double c_in = 0.5 * (sel_lo + sel_hi);
  const double c_out = s.values(m - 1) + span + 10.0 * delta + 1.0;
  SylvesterProblem p;
  p.K0 = H0 * P0 + c_in * Pp;
  p.K1 = H0 * Pp + c_out * P0;
  p.K0 = 0.5 * (p.K0 + p.K0.adjoint()).eval();
  p.K1 = 0.5 * (p.K1 + p.K1.adjoint()).eval();
  p.delta = delta;

  auto solve = [&](const Matrix& y) {
    p.Y = y;
    if (opt.solver == NodeSolver::eigen) return solve_sylvester_eigen(p);
    Contour c = enclosing_contour(sel_lo, sel_hi, delta);
    c.half_height += opt.contour_extra_height;
    return solve_sylvester_contour(p, c);
  };
  const Matrix x = P0 * solve(-P0 * S * Pp) * Pp;
  const Matrix zs = P0 * solve(P0 * S.adjoint() * Pp) * Pp;
  return x + zs.adjoint();
}

}  // namespace

ProjectorHierarchy build_hierarchy(const FormalSymbol& H, const GapSpec& gap, int order,
                                   const HierarchyOptions& options) {
  if (H.rows() != H.cols()) throw std::invalid_argument("build_hierarchy: H must be square");
  if (order < 0) throw std::invalid_argument("build_hierarchy: negative order");
  if (H.order() < order)
    throw std::invalid_argument("build_hierarchy: symbol known only to lattice order " +
                                std::to_string(H.order()) + ", requested " +
                                std::to_string(order));
  const auto& g = H.grid();
  const int m = H.rows();
  ProjectorHierarchy hier;
  hier.source = H;
  hier.gap = gap;
  const MatrixField H0 = H.coeff(0);
  hier.split = split_fibers(H0, gap);
  hier.rank = hier.split.empty() ? 0 : hier.split[0].count;

  MatrixField pi0(g, m, m);
  for (std::size_t k = 0; k < hier.split.size(); ++k) pi0.node(k) = selected_projector(hier.split[k]);
  const MatrixField pperp = MatrixField::identity(g, m) - pi0;
  hier.pi = FormalSymbol(g, m, m, H.q0(), order);
  hier.pi.set(0, pi0);

  for (int k = 0; k < order; ++k) {
    const int n = k + 1;
    const FormalSymbol& P = hier.pi;  // holds indices <= k at this point
    const FormalSymbol Hk = H.truncated(k);
    DefectRecord rec;
    rec.n = n;
    rec.R = moyal_coefficient(P, P, n);
    rec.T = moyal_coefficient(Hk, P, n) - moyal_coefficient(P, Hk, n);
    const MatrixField S = rec.T + commutator(H.coeff(n), pi0);

    const MatrixField hr = commutator(H0, rec.R);
    rec.comp1 = sup_norm(commutator(pi0, rec.R));
    rec.comp2 = std::max(sup_norm(multiply(pi0, hr - rec.T, pi0)),
                         sup_norm(multiply(pperp, hr + rec.T, pperp)));
    if (options.check_compat) {
      const double scale = std::max({1.0, sup_norm(rec.R), sup_norm(rec.T)});
      if (rec.comp1 > options.compat_tol * scale || rec.comp2 > options.compat_tol * scale)
      {
        char buf[128];
        std::snprintf(buf, sizeof buf, "compatibility relations fail at lattice order %d: comp1=%.3e comp2=%.3e", n,
                      rec.comp1, rec.comp2);
        throw CompatibilityError(buf);
      }
    }

    MatrixField next = multiply(pperp, rec.R, pperp) - multiply(pi0, rec.R, pi0);
    const auto nodes = static_cast<std::ptrdiff_t>(g.nodes());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < nodes; ++q) {
      try {
        next.node(q) += offdiagonal_solve(hier.split[q], H0.node(q), S.node(q), gap.delta, options);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    hier.pi.set(n, std::move(next));
    hier.defect_log.push_back(std::move(rec));
  }
  return hier;
}

namespace {

std::vector<double> evaluate_norms(const FormalSymbol& d, const std::vector<double>& h_values) {
  std::vector<double> out;
  out.reserve(h_values.size());
  for (double h : h_values) out.push_back(sup_norm(d.evaluate(h)));
  return out;
}

std::vector<double> lattice_variable(const std::vector<double>& h, int q0) {
  std::vector<double> t;
  for (double v : h) t.push_back(std::pow(v, 1.0 / q0));
  return t;
}

}  // namespace

DefectTable defect_orders(const ProjectorHierarchy& hier, const std::vector<double>& h_values,
                          int extra) {
  require_sweep(h_values, 0.0, "defect_orders");
  const int q0 = hier.pi.q0();
  const int K = hier.order();
  const int top = K + (extra < 0 ? 2 * q0 : extra);
  const FormalSymbol& P = hier.pi;
  const FormalSymbol idem = moyal_product(P, P, top) - P.with_order(top);
  const FormalSymbol comm = moyal_commutator(hier.source.truncated(top), P, top);
  const FormalSymbol comm_k = moyal_commutator(hier.source.truncated(K), P, top);

  DefectTable t;
  t.h = h_values;
  t.idempotency = evaluate_norms(idem, h_values);
  t.commutator = evaluate_norms(comm, h_values);
  t.commutator_truncated = evaluate_norms(comm_k, h_values);
  const auto tv = lattice_variable(h_values, q0);
  t.idempotency_fit = fit_slope(tv, t.idempotency);
  t.commutator_fit = fit_slope(tv, t.commutator);
  t.commutator_truncated_fit = fit_slope(tv, t.commutator_truncated);
  t.idempotency_fit.h = t.commutator_fit.h = t.commutator_truncated_fit.h = h_values;
  return t;
}

OrthogonalityTable orthogonality_defect(const ProjectorHierarchy& a, const ProjectorHierarchy& b,
                                        const std::vector<double>& h_values, int extra) {
  require_sweep(h_values, 0.0, "orthogonality_defect");
  if (!(a.pi.grid() == b.pi.grid())) throw GridMismatch("orthogonality_defect: grids differ");
  if (a.pi.q0() != b.pi.q0()) throw std::invalid_argument("orthogonality_defect: lattices differ");
  // Selections must be disjoint at every node, or identical everywhere, in
  // which case the defect is Pi # Pi - Pi.
  bool same = true;
  for (std::size_t k = 0; k < a.split.size(); ++k) {
    const auto& sa = a.split[k];
    const auto& sb = b.split[k];
    const bool equal = sa.first == sb.first && sa.count == sb.count;
    const bool overlap = sa.first < sb.first + sb.count && sb.first < sa.first + sa.count;
    if (overlap && !equal)
      throw std::invalid_argument("orthogonality_defect: spectral windows overlap");
    same = same && equal;
  }
  const int K = std::min(a.order(), b.order());
  const int top = K + (extra < 0 ? 2 * a.pi.q0() : extra);
  FormalSymbol prod = moyal_product(a.pi.truncated(K), b.pi.truncated(K), top);
  if (same) prod -= a.pi.truncated(K).with_order(top);
  OrthogonalityTable t;
  t.h = h_values;
  t.defect = evaluate_norms(prod, h_values);
  t.fit = fit_slope(lattice_variable(h_values, a.pi.q0()), t.defect);
  t.fit.h = h_values;
  return t;
}

GapScalingResult gap_scaling_probe(const std::function<FormalSymbol(double)>& family,
                                   const std::function<GapSpec(double)>& gap_for,
                                   int max_order, int max_derivative,
                                   const std::vector<double>& deltas, const HierarchyOptions& options) {
  if (deltas.size() < 2) throw std::invalid_argument("gap_scaling_probe: need two deltas");
  GapScalingResult res;
  for (double d : deltas) {
    const ProjectorHierarchy hier = build_hierarchy(family(d), gap_for(d), max_order, options);
    for (int j = 0; j <= max_order; ++j) {
      const MatrixField pj = hier.pi.coeff(j);
      for (int a = 0; a <= max_derivative; ++a) {
        double best = 0.0;
        for (int ax = 0; ax <= a; ++ax) best = std::max(best, sup_norm(derive(pj, ax, a - ax)));
        res.rows.push_back({j, a, d, best});
      }
    }
  }
  for (int j = 0; j <= max_order; ++j)
    for (int a = 0; a <= max_derivative; ++a) {
      std::vector<double> x, y;
      for (const auto& r : res.rows)
        if (r.j == j && r.derivative_order == a) {
          x.push_back(r.delta);
          y.push_back(r.norm);
        }
      const SlopeFit f = fit_slope(x, y);
      res.fits.push_back({j, a, f.valid ? f.slope : 0.0, -a - 2.0 * j});
    }
  return res;
}

}  // namespace adiaband
