#include "adiaband/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace adiaband {

SpectrumReport compare_spectra(const std::vector<double>& h,
                               const std::vector<std::vector<double>>& full,
                               const std::vector<std::vector<double>>& effective) {
  if (h.size() != full.size() || h.size() != effective.size())
    throw std::invalid_argument("compare_spectra: families must share the h list");
  SpectrumReport r;
  r.pairs = std::numeric_limits<int>::max();
  for (std::size_t k = 0; k < h.size(); ++k) {
    SpectrumRow row;
    row.h = h[k];
    row.full = full[k];
    row.effective = effective[k];
    std::sort(row.full.begin(), row.full.end());
    std::sort(row.effective.begin(), row.effective.end());
    if (row.full.size() != row.effective.size()) r.count_mismatch = true;
    const std::size_t n = std::min(row.full.size(), row.effective.size());
    for (std::size_t j = 0; j < n; ++j) row.diff.push_back(std::abs(row.full[j] - row.effective[j]));
    r.pairs = std::min(r.pairs, static_cast<int>(n));
    r.rows.push_back(std::move(row));
  }
  if (h.empty()) r.pairs = 0;
  for (const auto& row : r.rows) {
    double m = 0.0;
    for (int j = 0; j < r.pairs; ++j) m = std::max(m, row.diff[j]);
    r.max_diff.push_back(m);
  }
  if (r.pairs > 0) r.fit = fit_slope(h, r.max_diff);
  return r;
}

double quasimode_residual(const Matrix& op, const Vector& psi, Complex mu) {
  if (op.cols() != psi.size()) throw std::invalid_argument("quasimode_residual: size mismatch");
  const double n = psi.norm();
  if (!(n > 0.0)) throw std::invalid_argument("quasimode_residual: zero vector");
  return (op * psi - mu * psi).norm() / n;
}

double BumpProfile::operator()(double e) const {
  if (!(e > lo && e < hi)) return 0.0;
  const double u = (2.0 * e - lo - hi) / (hi - lo);
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

FunctionalCalculusNorms functional_calculus_norms(const Matrix& H, const Matrix& Pi,
                                                  const BumpProfile& chi) {
  if (H.rows() != Pi.rows() || H.cols() != Pi.cols())
    throw std::invalid_argument("functional_calculus_norms: size mismatch");
  const SpectrumResult s = spectrum(H, chi.lo, chi.hi, true);
  if (!s.hermitian) throw std::invalid_argument("functional_calculus_norms: H not Hermitian");
  FunctionalCalculusNorms out;
  const Eigen::Index r = s.values.size();
  out.rank = static_cast<int>(r);
  if (r == 0) return out;
  RealVector c(r);
  for (Eigen::Index k = 0; k < r; ++k) c(k) = chi(s.values(k));
  const Matrix& V = s.vectors;
  const Matrix PV = Pi * V;
  const Matrix PhV = Pi.adjoint() * V;
  const Matrix Vc = V * c.asDiagonal();

  // [chi(H), Pi] = A B^*, A = [V, -Pi V], B = [Pi^* V chi, V chi]
  Matrix A(V.rows(), 2 * r), B(V.rows(), 2 * r);
  A << V, -PV;
  B << PhV * c.asDiagonal(), Vc;
  const Eigen::Index k = std::min<Eigen::Index>(2 * r, V.rows());
  Eigen::HouseholderQR<Matrix> qa(A), qb(B);
  const Matrix Ra = qa.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Matrix Rb = qb.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(Ra * Rb.adjoint());
  out.commutator = svd.singularValues()(0);
  out.range = operator_norm((PV - V) * c.asDiagonal());
  return out;
}

BaseGrid centered_base(double half_width, int n) {
  BaseGrid b;
  b.x_min = -half_width;
  b.x_max = half_width;
  b.n = n;
  b.periodic = true;
  return b;
}

Matrix quantize_formal_symbol(const FormalSymbol& sym, const BaseGrid& base, double h,
                              int interp_points) {
  std::vector<std::pair<double, FieldInterpolator>> parts;
  for (const auto& [n, c] : sym.terms())
    parts.emplace_back(std::pow(h, sym.exponent(n)), FieldInterpolator(c, interp_points));
  const int rows = sym.rows(), cols = sym.cols();
  return weyl_quantize_matrix_1d(
      [&](double x, double xi, Matrix& out) {
        out.setZero(rows, cols);
        Matrix tmp(rows, cols);
        for (const auto& [w, f] : parts) {
          f(x, xi, tmp);
          out += w * tmp;
        }
      },
      rows, cols, h, base);
}

namespace {

std::vector<double> sqrt_all(const std::vector<double>& h) {
  std::vector<double> t;
  for (double v : h) t.push_back(std::sqrt(v));
  return t;
}

}  // namespace

MagneticWellResult run_magnetic_well(const MagneticWellRun& run) {
  require_sweep(run.h_values, 0.0, "magnetic_well");
  MagneticWellResult res;
  res.minimum = check_magnetic_well(run.spec, run.symbol_grid);
  const double mu0 = res.minimum.mu0;
  const int K = run.K < 0 ? run.spec.J : run.K;
  const FiberPolynomialSymbol sym = magnetic_well_symbol(run.spec);
  const FockLadder ladder(run.m);
  const FormalSymbol H = sym.to_formal_symbol(run.symbol_grid, ladder);
  const ProjectorHierarchy hier = build_hierarchy(H, GapSpec::bands(0, 0, run.gap_delta), K);
  for (const auto& d : hier.defect_log) res.comp_log.push_back(std::max(d.comp1, d.comp2));
  const FactorPair pair = build_factors(hier, build_u0(hier.pi0()), K);
  const FormalSymbol M = build_effective(H, pair, K);

  std::vector<std::vector<double>> full_scaled, eff_scaled;
  std::vector<double> qm_fe, qm_ef;
  for (double h : run.h_values) {
    MagneticWellPoint p;
    p.h = h;
    const BaseGrid base = centered_base(run.box_factor * std::sqrt(h), run.base_n);
    const Matrix Hw = quantize_fiber_model(sym, ladder, base, h);
    const double top = mu0 + run.window_C * h;
    const SpectrumResult fs = spectrum(Hw, mu0 - 1.0, top, run.quasimodes);
    const Matrix Mw = quantize_formal_symbol(M, base, h);
    const SpectrumResult es = spectrum(Mw, mu0 - 1.0, top, run.quasimodes);
    if (fs.values.size() == 0) throw Error("magnetic_well: no full eigenvalue below the window top");
    p.lowest = fs.values(0);
    std::vector<Eigen::Index> fidx, eidx;
    for (Eigen::Index k = 0; k < fs.values.size(); ++k)
      if (fs.values(k) > mu0) {
        p.full.push_back(fs.values(k));
        fidx.push_back(k);
      }
    for (Eigen::Index k = 0; k < es.values.size(); ++k)
      if (es.values(k) > mu0) {
        p.effective.push_back(es.values(k));
        eidx.push_back(k);
        if (!es.hermitian)
          p.effective_max_imag = std::max(p.effective_max_imag, std::abs(es.complex_values(k).imag()));
      }
    if (run.quasimodes) {
      const Matrix Lw = quantize_formal_symbol(pair.L, base, h);
      const Matrix ellw = quantize_formal_symbol(pair.ell, base, h);
      for (Eigen::Index k : fidx)
        p.residual_full_to_effective.push_back(
            quasimode_residual(Mw, Lw * fs.vectors.col(k), fs.values(k)));
      for (Eigen::Index k : eidx) {
        const Complex mu = es.hermitian ? Complex(es.values(k), 0.0) : es.complex_values(k);
        p.residual_effective_to_full.push_back(
            quasimode_residual(Hw, ellw.adjoint() * es.vectors.col(k), mu));
      }
      auto mx = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
      };
      qm_fe.push_back(mx(p.residual_full_to_effective));
      qm_ef.push_back(mx(p.residual_effective_to_full));
    }
    std::vector<double> fsc, esc;
    for (double v : p.full) fsc.push_back(v * h);
    for (double v : p.effective) esc.push_back(v * h);
    full_scaled.push_back(std::move(fsc));
    eff_scaled.push_back(std::move(esc));
    res.lowest_ratio.push_back(std::abs(p.lowest - 1.0) / h);
    res.points.push_back(std::move(p));
  }
  res.spectra = compare_spectra(run.h_values, full_scaled, eff_scaled);
  if (run.quasimodes) {
    const auto t = sqrt_all(run.h_values);
    res.residual_fit_full_to_effective = fit_slope(t, qm_fe);
    res.residual_fit_effective_to_full = fit_slope(t, qm_ef);
  }
  const auto smallest = std::min_element(res.points.begin(), res.points.end(),
                                         [](const auto& a, const auto& b) { return a.h < b.h; });
  res.second_order_coefficient = (smallest->lowest - mu0) / smallest->h;
  return res;
}

FunctionalCalculusResult run_functional_calculus(const FunctionalCalculusRun& run) {
  require_sweep(run.h_values, 0.0, "functional_calculus");
  const WellMinimum wm = check_magnetic_well(run.spec, run.symbol_grid);
  const FiberPolynomialSymbol sym = magnetic_well_symbol(run.spec);
  const FockLadder ladder(run.m);
  const FormalSymbol H = sym.to_formal_symbol(run.symbol_grid, ladder);
  const ProjectorHierarchy hier = build_hierarchy(H, GapSpec::bands(0, 0, run.gap_delta), run.K);

  FunctionalCalculusResult res;
  res.chi = BumpProfile{wm.mu0 - run.epsilon, wm.mu0 + 0.5 * run.spec.b0};
  if (res.chi.hi > wm.mu0 + run.spec.b0)
    throw std::invalid_argument("functional_calculus: bump reaches the band gap level");
  for (double h : run.h_values) {
    int n = static_cast<int>(std::ceil(2.0 * run.half_width * run.xi_reach / (std::numbers::pi * h)));
    n += n % 2;
    const BaseGrid base = centered_base(run.half_width, n);
    const Matrix Hw = quantize_fiber_model(sym, ladder, base, h);
    const Matrix Pw = quantize_formal_symbol(hier.pi, base, h);
    res.h.push_back(h);
    res.base_n.push_back(n);
    res.norms.push_back(functional_calculus_norms(Hw, Pw, res.chi));
  }
  std::vector<double> c, r;
  for (const auto& nrm : res.norms) {
    c.push_back(nrm.commutator);
    r.push_back(nrm.range);
  }
  const auto t = sqrt_all(res.h);
  res.commutator_fit = fit_slope(t, c);
  res.range_fit = fit_slope(t, r);
  return res;
}

}  // namespace adiaband
