#include "adiaband_cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "adiaband/degennes.hpp"
#include "adiaband/harness.hpp"
#include "adiaband/test_models.hpp"

namespace adiaband::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Builder {
  RunResult r;
  const Logger& log;

  void say(const std::string& s) const {
    if (log) log(s);
  }

  Table& table(std::string name, std::vector<std::string> columns) {
    r.tables.push_back(Table{std::move(name), std::move(columns), {}});
    return r.tables.back();
  }

  void bound(std::string name, double value, double threshold, std::string table) {
    r.assertions.push_back({std::move(name), value, threshold, "<=", value <= threshold, std::move(table), ""});
  }

  void slope(std::string name, std::string variable, const SlopeFit& fit, double threshold,
             std::string table) {
    Assertion a{name + " slope", fit.valid ? fit.slope : kNaN, threshold, ">=",
                slope_at_least(fit, threshold), table, ""};
    if (fit.all_saturated) a.note = "every point at the numerical floor";
    r.assertions.push_back(std::move(a));
    r.slopes.push_back({std::move(name), std::move(variable), fit, threshold, std::move(table)});
  }
};

json grid_json(const PhaseSpaceGrid& g) {
  return {{"boundary", g.boundary == Boundary::periodic ? "periodic" : "clamped"},
          {"x", {g.x_min, g.x_max}},
          {"xi", {g.xi_min, g.xi_max}},
          {"n", {g.n_x, g.n_xi}},
          {"margin_cells", g.margin_cells},
          {"fd_order", g.fd_order}};
}

std::string fit_variable(int q0) { return q0 == 1 ? "h" : "h^(1/" + std::to_string(q0) + ")"; }

FormalSymbol build_model(const RunConfig& c) {
  const auto& m = c.model;
  if (m.name == "two_level") return two_level_model(c.grid, c.K);
  if (m.name == "dirac") return dirac_family(c.grid, m.delta, c.K);
  if (m.name == "xi_only") return xi_only_model(c.grid, c.K);
  const FockLadder ladder(c.fiber_m);
  return magnetic_well_symbol(m.well).to_formal_symbol(c.grid, ladder);
}

// Random 2x2 symbol with quadratic polynomial entries at lattice indices 0 and 1.
FormalSymbol random_polynomial_symbol(const PhaseSpaceGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FormalSymbol s(g, 2, 2, 1, 1);
  for (int n = 0; n <= 1; ++n) {
    Matrix c[6];
    for (auto& m : c) {
      m.resize(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = Complex(u(rng), u(rng));
    }
    s.set(n, MatrixField::from_function(g, 2, 2, [&](double x, double xi) -> Matrix {
            return c[0] + x * c[1] + xi * c[2] + x * x * c[3] + x * xi * c[4] + xi * xi * c[5];
          }));
  }
  return s;
}

double max_coeff_norm(const FormalSymbol& s) {
  double v = 0.0;
  for (const auto& [n, c] : s.terms()) v = std::max(v, sup_norm(c));
  return v;
}

void moyal_check(const RunConfig& c, Builder& b) {
  const auto& g = c.grid;
  FormalSymbol x(g, 1, 1, 1, 2), xi(g, 1, 1, 1, 2);
  x.set(0, MatrixField::from_function(g, 1, 1, [](double a, double) { return Matrix::Constant(1, 1, a); }));
  xi.set(0, MatrixField::from_function(g, 1, 1, [](double, double v) { return Matrix::Constant(1, 1, v); }));

  b.say("canonical commutation");
  const FormalSymbol comm = moyal_commutator(x, xi, 2);
  auto& t = b.table("moyal_check", {"check", "n", "defect"});
  const MatrixField ih = Complex(0, 1) * MatrixField::identity(g, 1);
  double canon = 0.0;
  for (int n = 0; n <= 2; ++n) {
    const double d = sup_norm(n == 1 ? comm.coeff(1) - ih : comm.coeff(n));
    canon = std::max(canon, d);
    t.add({"canonical_commutation", (long long)n, d});
  }
  b.bound("canonical commutation", canon, 1e-12, t.file());

  // quantized on a base box inside the symbol grid
  const double half = 0.25 * std::min(g.x_max - g.x_min, g.xi_max - g.xi_min);
  const int n_base = c.base_n;
  auto& q = b.table("quantized_commutation", {"h", "defect"});
  double qmax = 0.0;
  for (double h : c.h_values) {
    const Matrix A = quantize_formal_symbol(comm, centered_base(half, n_base), h, 4);
    const double d = (A - Complex(0, h) * Matrix::Identity(A.rows(), A.cols())).cwiseAbs().maxCoeff();
    qmax = std::max(qmax, d);
    q.add({h, d});
  }
  b.bound("quantized canonical commutation", qmax, 1e-12, q.file());

  b.say("associativity and adjoint on seeded polynomial symbols");
  std::mt19937_64 rng(c.seed);
  const auto A = random_polynomial_symbol(g, rng);
  const auto B = random_polynomial_symbol(g, rng);
  const auto C = random_polynomial_symbol(g, rng);
  const auto AB = moyal_product(A, B, c.K);
  const auto left = moyal_product(AB, C, c.K);
  const auto right = moyal_product(A, moyal_product(B, C, c.K), c.K);
  const auto adj_l = AB.adjoint();
  const auto adj_r = moyal_product(B.adjoint(), A.adjoint(), c.K);
  const double scale = std::max(1.0, max_coeff_norm(left));
  const double scale_ab = std::max(1.0, max_coeff_norm(AB));
  double assoc = 0.0, adj = 0.0;
  for (int n = 0; n <= c.K; ++n) {
    const double da = sup_norm(left.coeff(n) - right.coeff(n)) / scale;
    const double dj = sup_norm(adj_l.coeff(n) - adj_r.coeff(n)) / scale_ab;
    assoc = std::max(assoc, da);
    adj = std::max(adj, dj);
    t.add({"associativity", (long long)n, da});
    t.add({"adjoint_reversal", (long long)n, dj});
  }
  b.bound("associativity", assoc, 1e-9, t.file());
  b.bound("adjoint reversal", adj, 1e-9, t.file());
  b.r.metadata["K"] = c.K;
  b.r.metadata["base_n"] = n_base;
  b.r.metadata["base_half_width"] = half;
}

void compat_table(Builder& b, const ProjectorHierarchy& hier) {
  auto& t = b.table("compat", {"n", "comp1", "comp2"});
  double worst = 0.0;
  for (const auto& d : hier.defect_log) {
    t.add({(long long)d.n, d.comp1, d.comp2});
    worst = std::max({worst, d.comp1, d.comp2});
  }
  b.bound("compatibility", worst, 1e-8, t.file());
}

HierarchyOptions hierarchy_options(const RunConfig& c) {
  HierarchyOptions o;
  o.solver = c.solver;
  return o;
}

void projector_build(const RunConfig& c, Builder& b) {
  const auto H = build_model(c);
  b.say("hierarchy to lattice order " + std::to_string(c.K));
  const auto hier = build_hierarchy(H, c.gap, c.K, hierarchy_options(c));
  compat_table(b, hier);

  double herm = 0.0;
  for (const auto& [n, p] : hier.pi.terms()) herm = std::max(herm, sup_norm(p - p.adjoint()));
  b.bound("hermiticity", herm, 1e-10, "");

  b.say("defect sweep");
  const auto d = defect_orders(hier, c.h_values);
  auto& t = b.table("defects", {"h", "idempotency", "commutator", "commutator_truncated"});
  for (std::size_t k = 0; k < d.h.size(); ++k)
    t.add({d.h[k], d.idempotency[k], d.commutator[k], d.commutator_truncated[k]});
  const auto var = fit_variable(H.q0());
  b.slope("idempotency", var, d.idempotency_fit, c.K + 0.8, t.file());
  b.slope("commutator", var, d.commutator_fit, c.K + 0.8, t.file());
  b.r.slopes.push_back({"commutator_truncated", var, d.commutator_truncated_fit, c.K + 0.8, t.file()});
  b.r.metadata["rank"] = hier.rank;
}

void orthogonality(const RunConfig& c, Builder& b) {
  const auto H = build_model(c);
  b.say("hierarchies for both selections");
  const auto a = build_hierarchy(H, c.gap, c.K, hierarchy_options(c));
  const auto z = build_hierarchy(H, c.gap2, c.K, hierarchy_options(c));
  const auto o = orthogonality_defect(a, z, c.h_values);
  auto& t = b.table("orthogonality", {"h", "defect"});
  for (std::size_t k = 0; k < o.h.size(); ++k) t.add({o.h[k], o.defect[k]});
  b.slope("orthogonality", fit_variable(H.q0()), o.fit, c.K + 0.8, t.file());
  b.r.metadata["rank"] = {a.rank, z.rank};
}

void factorization(const RunConfig& c, Builder& b) {
  const auto H = build_model(c);
  b.say("hierarchy and factors");
  const auto hier = build_hierarchy(H, c.gap, c.K, hierarchy_options(c));
  const auto pair = build_factors(hier, build_u0(hier.pi0()), c.K, c.gauge);

  auto& o = b.table("factor_orders", {"n", "w_norm", "compat", "L_minus_ell"});
  double diff = 0.0, compat = 0.0;
  for (int n = 0; n <= c.K; ++n) {
    const double d = sup_norm(pair.L.coeff(n) - pair.ell.coeff(n));
    const double w = n - 1 < (int)pair.w_norms.size() && n > 0 ? pair.w_norms[n - 1] : 0.0;
    const double cp = n - 1 < (int)pair.compat.size() && n > 0 ? pair.compat[n - 1] : 0.0;
    diff = std::max(diff, d);
    compat = std::max(compat, cp);
    o.add({(long long)n, w, cp, d});
  }
  b.bound("factor compatibility", compat, 1e-8, o.file());
  if (c.gauge == GaugeSplit::equal) b.bound("selfadjoint L = ell", diff, 1e-9, o.file());
  if (c.model.name == "xi_only" && c.K >= 1) {
    const auto& L = pair.L;
    const auto& l = pair.ell;
    const double rem = sup_norm(multiply(L.coeff(1), l.coeff(0).adjoint()) +
                                multiply(L.coeff(0), l.coeff(1).adjoint()));
    b.bound("subprincipal identity", rem, 1e-8, o.file());
  }

  b.say("factorization defects");
  const auto v = verify_factorization(pair, hier, c.h_values);
  auto& t = b.table("factorization", {"h", "left", "right"});
  for (std::size_t k = 0; k < v.h.size(); ++k) t.add({v.h[k], v.left[k], v.right[k]});
  const auto var = fit_variable(H.q0());
  b.slope("left factorization", var, v.left_fit, c.K + 0.8, t.file());
  b.slope("right factorization", var, v.right_fit, c.K + 0.8, t.file());

  const auto M = build_effective(H, pair, c.K);
  auto& e = b.table("effective", {"n", "sup_norm"});
  for (int n = 0; n <= c.K; ++n) e.add({(long long)n, sup_norm(M.coeff(n))});
  b.r.metadata["gauge"] = c.gauge == GaugeSplit::equal ? "equal" : "left_only";
}

void magnetic_well(const RunConfig& c, Builder& b) {
  MagneticWellRun run;
  run.spec = c.model.well;
  run.m = c.fiber_m;
  run.base_n = c.base_n;
  run.box_factor = c.box_factor;
  run.h_values = c.h_values;
  run.symbol_grid = c.grid;
  run.K = c.K;
  run.window_C = c.window_C;
  run.quasimodes = c.quasimodes;
  b.say("magnetic well sweep over " + std::to_string(c.h_values.size()) + " h values");
  const auto res = run_magnetic_well(run);

  auto& s = b.table("spectra", {"h", "index", "full_over_h", "effective_over_h", "diff"});
  for (std::size_t k = 0; k < res.points.size(); ++k) {
    const auto& p = res.points[k];
    const auto& row = res.spectra.rows[k];
    for (std::size_t i = 0; i < row.diff.size(); ++i)
      s.add({p.h, (long long)i, p.full[i], p.effective[i], row.diff[i]});
  }
  auto& d = b.table("defects", {"h", "max_diff", "lowest_over_h", "lowest_ratio", "effective_max_imag",
                                "residual_full_to_effective", "residual_effective_to_full"});
  auto worst = [](const std::vector<double>& v) {
    return v.empty() ? kNaN : *std::max_element(v.begin(), v.end());
  };
  for (std::size_t k = 0; k < res.points.size(); ++k) {
    const auto& p = res.points[k];
    d.add({p.h, res.spectra.max_diff[k], p.lowest, res.lowest_ratio[k], p.effective_max_imag,
           worst(p.residual_full_to_effective), worst(p.residual_effective_to_full)});
  }
  b.slope("spectral difference", "h", res.spectra.fit, c.spectral_slope_min, d.file());
  if (c.quasimodes) {
    b.slope("quasimode full to effective", "sqrt(h)", res.residual_fit_full_to_effective, c.K + 0.8, d.file());
    b.slope("quasimode effective to full", "sqrt(h)", res.residual_fit_effective_to_full, c.K + 0.8, d.file());
  }
  auto& ct = b.table("compat", {"n", "comp"});
  for (std::size_t k = 0; k < res.comp_log.size(); ++k) ct.add({(long long)k, res.comp_log[k]});
  b.bound("compatibility", worst(res.comp_log), 1e-8, ct.file());

  b.r.metadata["spectrum_report"] = {{"pairs", res.spectra.pairs},
                                     {"count_mismatch", res.spectra.count_mismatch},
                                     {"window", "(mu0 h, mu0 h + C h^2)"},
                                     {"window_C", c.window_C},
                                     {"mu0", res.minimum.mu0},
                                     {"minimum", {res.minimum.x, res.minimum.xi}},
                                     {"second_order_coefficient", res.second_order_coefficient}};
}

void degennes(const RunConfig& c, Builder& b) {
  b.say("dispersion table");
  const auto rows = dispersion_table(c.gammas, c.n_max, c.sigmas);
  auto& t = b.table("dispersion", {"gamma", "n", "sigma", "mu"});
  double anchor = 0.0;
  bool anchored = false;
  for (const auto& r : rows) {
    t.add({r.gamma, (long long)r.n, r.sigma, r.mu});
    if (r.sigma != 0.0) continue;
    // harmonic-oscillator parity levels at sigma = 0
    if (r.gamma == 0.0) anchor = std::max(anchor, std::abs(r.mu - (4 * r.n - 3)));
    else if (r.gamma == kDirichlet) anchor = std::max(anchor, std::abs(r.mu - (4 * r.n - 1)));
    else continue;
    anchored = true;
  }
  if (anchored) b.bound("sigma = 0 anchors", anchor, 1e-6, t.file());
  if (!c.minima) return;

  auto& m = b.table("minima", {"gamma", "n", "theta", "sigma_star", "curvature", "status"});
  for (double gamma : c.gammas)
    for (int n = 1; n <= c.n_max; ++n) {
      b.say("dispersion minimum gamma=" + format_double(gamma) + " n=" + std::to_string(n));
      try {
        const auto d = dispersion_minimum(gamma, n);
        m.add({gamma, (long long)n, d.theta, d.sigma_star, d.curvature, "ok"});
        b.r.metadata["theta"].push_back({{"gamma", format_double(gamma)}, {"n", n}, {"theta", d.theta},
                                         {"sigma_star", d.sigma_star}});
      } catch (const ConvergenceError& e) {
        // the Dirichlet curves decrease monotonically and never attain their infimum
        m.add({gamma, (long long)n, kNaN, kNaN, kNaN, std::string("no interior minimum: ") + e.what()});
        b.r.metadata["theta"].push_back({{"gamma", format_double(gamma)}, {"n", n}, {"theta", nullptr},
                                         {"status", "no interior minimum"}});
      }
    }
}

void functional_calculus(const RunConfig& c, Builder& b) {
  FunctionalCalculusRun run;
  run.spec = c.model.well;
  run.m = c.fiber_m;
  run.half_width = c.half_width;
  run.xi_reach = c.xi_reach;
  run.h_values = c.h_values;
  run.symbol_grid = c.grid;
  run.K = c.K;
  run.epsilon = c.epsilon;
  b.say("functional calculus sweep");
  const auto res = run_functional_calculus(run);
  auto& t = b.table("functional_calculus", {"h", "base_n", "rank", "commutator", "range"});
  for (std::size_t k = 0; k < res.h.size(); ++k)
    t.add({res.h[k], (long long)res.base_n[k], (long long)res.norms[k].rank, res.norms[k].commutator,
           res.norms[k].range});
  b.slope("commutator", "sqrt(h)", res.commutator_fit, c.K + 0.8, t.file());
  b.slope("range inclusion", "sqrt(h)", res.range_fit, c.K + 0.8, t.file());
  b.r.metadata["chi_support"] = {res.chi.lo, res.chi.hi};
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg, const Logger& log) {
  Builder b{RunResult{}, log};
  b.r.experiment = cfg.experiment;
  switch (cfg.experiment) {
    case Experiment::moyal_check: moyal_check(cfg, b); break;
    case Experiment::projector_build: projector_build(cfg, b); break;
    case Experiment::orthogonality: orthogonality(cfg, b); break;
    case Experiment::factorization: factorization(cfg, b); break;
    case Experiment::magnetic_well: magnetic_well(cfg, b); break;
    case Experiment::degennes: degennes(cfg, b); break;
    case Experiment::functional_calculus: functional_calculus(cfg, b); break;
  }
  if (cfg.experiment != Experiment::degennes) {
    b.r.metadata["grid"] = grid_json(cfg.grid);
    b.r.metadata["K"] = cfg.K;
  }
  if (cfg.experiment == Experiment::magnetic_well || cfg.experiment == Experiment::functional_calculus ||
      cfg.model.name == "magnetic_well")
    b.r.metadata["fiber_m"] = cfg.fiber_m;
  if (cfg.experiment == Experiment::magnetic_well) b.r.metadata["base_n"] = cfg.base_n;
  if (!cfg.model.name.empty()) b.r.metadata["model"] = cfg.model.name;
  return std::move(b.r);
}

}  // namespace adiaband::cli
