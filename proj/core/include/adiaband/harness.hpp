#pragma once

#include <string>
#include <vector>

#include "adiaband/factorization.hpp"
#include "adiaband/magnetic_well.hpp"
#include "adiaband/quantize.hpp"
#include "adiaband/slope_fit.hpp"

namespace adiaband {

struct SpectrumRow {
  double h = 0.0;
  std::vector<double> full;
  std::vector<double> effective;
  std::vector<double> diff;  // |full - effective| after sorted pairing
};

struct SpectrumReport {
  std::vector<SpectrumRow> rows;
  int pairs = 0;             // pairs used in every row (minimum count)
  bool count_mismatch = false;
  std::vector<double> max_diff;
  SlopeFit fit;              // of max_diff against h
};

// Pairs sorted eigenvalues index by index; a count mismatch is recorded and
// the comparison continues with the common count.
SpectrumReport compare_spectra(const std::vector<double>& h,
                               const std::vector<std::vector<double>>& full,
                               const std::vector<std::vector<double>>& effective);

// |(op - mu) psi| / |psi|
double quasimode_residual(const Matrix& op, const Vector& psi, Complex mu);

// Smooth bump exp(1 - 1/(1 - u^2)) on (lo, hi), u the affine map to (-1, 1).
struct BumpProfile {
  double lo = 0.0;
  double hi = 1.0;
  double operator()(double e) const;
};

struct FunctionalCalculusNorms {
  double commutator = 0.0;  // |[chi(H), Pi]|
  double range = 0.0;       // |Pi chi(H) - chi(H)|
  int rank = 0;             // eigenpairs of H inside the bump support
};

// chi(H) from the eigenpairs of Hermitian H inside the bump support; the
// norms are computed from thin QR factors (chi(H) has low rank).
FunctionalCalculusNorms functional_calculus_norms(const Matrix& H, const Matrix& Pi,
                                                  const BumpProfile& chi);

// Base grid of half-width `half_width` with n nodes (periodic discrete transform).
BaseGrid centered_base(double half_width, int n);

// Quantizes a formal symbol sampled on its grid (local interpolation) at the
// given h, h inserted as t^n with t = h^{1/q0}.
Matrix quantize_formal_symbol(const FormalSymbol& sym, const BaseGrid& base, double h,
                              int interp_points = 8);

struct MagneticWellRun {
  MagneticWellSpec spec;
  int m = 12;
  int base_n = 256;
  double box_factor = 20.0;  // base half-width = box_factor * sqrt(h)
  std::vector<double> h_values;
  PhaseSpaceGrid symbol_grid;
  int K = -1;             // lattice truncation of hierarchy/factors/effective; -1 means J
  double window_C = 2.0;  // window (mu0, mu0 + C h) in units of h
  double gap_delta = 1.0;
  bool quasimodes = true;
};

struct MagneticWellPoint {
  double h = 0.0;
  double lowest = 0.0;                 // lowest eigenvalue of the full operator / h
  std::vector<double> full;            // window eigenvalues / h
  std::vector<double> effective;       // real parts, window eigenvalues / h
  double effective_max_imag = 0.0;
  std::vector<double> residual_full_to_effective;
  std::vector<double> residual_effective_to_full;
};

struct MagneticWellResult {
  WellMinimum minimum;
  std::vector<MagneticWellPoint> points;
  SpectrumReport spectra;           // differences in the original scale (times h)
  SlopeFit residual_fit_full_to_effective;  // against t = sqrt(h)
  SlopeFit residual_fit_effective_to_full;
  std::vector<double> lowest_ratio;     // |lambda_1/h - 1| / h per h
  double second_order_coefficient = 0.0;  // (lambda_1/h - mu0)/h at the smallest h
  std::vector<double> comp_log;         // hierarchy compatibility residuals
};

MagneticWellResult run_magnetic_well(const MagneticWellRun& run);

struct FunctionalCalculusRun {
  MagneticWellSpec spec;
  int m = 8;
  double half_width = 2.6;
  double xi_reach = 2.0;   // base grid sized so pi h / dx >= xi_reach
  std::vector<double> h_values;
  PhaseSpaceGrid symbol_grid;
  int K = 1;
  double epsilon = 0.2;
  double gap_delta = 1.0;
};

struct FunctionalCalculusResult {
  std::vector<double> h;
  std::vector<FunctionalCalculusNorms> norms;
  std::vector<int> base_n;
  SlopeFit commutator_fit;  // against t = sqrt(h)
  SlopeFit range_fit;
  BumpProfile chi;
};

FunctionalCalculusResult run_functional_calculus(const FunctionalCalculusRun& run);

}  // namespace adiaband
