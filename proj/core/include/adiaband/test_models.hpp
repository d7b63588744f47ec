#pragma once

#include "adiaband/formal_symbol.hpp"

namespace adiaband {

// H0 = [[1 + 0.3 sin x cos xi, 0], [0, -1]], H1 = [[0, g], [g, 0]] with
// g = 0.2 exp(-x^2 - xi^2); no terms beyond order one.
FormalSymbol two_level_model(const PhaseSpaceGrid& grid, int order);

// H0 = x sx + xi sy + (delta/2) sz, gap 2 sqrt(x^2 + xi^2 + delta^2/4) >= delta.
FormalSymbol dirac_family(const PhaseSpaceGrid& grid, double delta, int order);

// Constant symbol H0 = value, no higher terms.
FormalSymbol constant_model(const PhaseSpaceGrid& grid, const Matrix& value, int order, int q0 = 1);

// x-independent model: H0 = diag(0, 2 + cos xi) plus H1 = [[cos xi, s], [s, 0]],
// s = 0.3 sin xi. Used for the subprincipal identities.
FormalSymbol xi_only_model(const PhaseSpaceGrid& grid, int order);

}  // namespace adiaband
