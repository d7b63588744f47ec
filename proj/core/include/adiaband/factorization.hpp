#pragma once

#include <vector>

#include "adiaband/projector.hpp"

namespace adiaband {

// How the free range component at each order is shared between L and ell:
// (L_{k+1} u0) + conj(ell_{k+1} u0) = -W_{k+1}.
enum class GaugeSplit {
  equal,     // each side takes -W/2
  left_only  // L takes -W, ell takes 0
};

struct FactorPair {
  FormalSymbol L;    // rows 1 x m
  FormalSymbol ell;  // rows 1 x m
  MatrixField u0;    // column m x 1, unit norm
  GaugeSplit gauge = GaugeSplit::equal;
  std::vector<double> w_norms;    // sup |W_{k+1}| per built order
  std::vector<double> compat;     // sup of the range-block residuals per order
};

// Unit vector field spanning a rank-one Pi0, with a smooth phase convention:
// the component largest at the central node is made real positive wherever it
// stays away from zero; otherwise phases are aligned between neighbours.
MatrixField build_u0(const MatrixField& pi0);

FactorPair build_factors(const ProjectorHierarchy& hier, const MatrixField& u0, int order,
                         GaugeSplit gauge = GaugeSplit::equal, double compat_tol = 1e-8);

struct FactorizationCheck {
  std::vector<double> h;
  std::vector<double> left;   // |L # ell^* - 1|
  std::vector<double> right;  // |ell^* # L - Pi|
  SlopeFit left_fit;
  SlopeFit right_fit;
};

FactorizationCheck verify_factorization(const FactorPair& pair, const ProjectorHierarchy& hier,
                                        const std::vector<double>& h_values, int extra = -1);

// Scalar effective symbol L # H # ell^* truncated at lattice order `order`.
FormalSymbol build_effective(const FormalSymbol& H, const FactorPair& pair, int order);

}  // namespace adiaband
