#pragma once

#include <functional>
#include <vector>

#include "adiaband/formal_symbol.hpp"
#include "adiaband/slope_fit.hpp"
#include "adiaband/sylvester.hpp"

namespace adiaband {

// Selection of the isolated spectral subset sigma_0(x, xi) of H0.
// `window` takes the eigenvalues inside [lo, hi]; `bands` takes the sorted
// eigenvalue indices first..last (0-based). Either way the rest of the fiber
// spectrum must stay at least `delta` away at every node.
struct GapSpec {
  enum class Mode { window, bands };
  Mode mode = Mode::window;
  double lo = 0.0;
  double hi = 0.0;
  int first = 0;
  int last = 0;
  double delta = 0.0;

  static GapSpec window(double lo, double hi, double delta);
  static GapSpec bands(int first, int last, double delta);
};

// Eigendecomposition of H0 at one node with the selected index range.
struct NodeSplit {
  RealVector values;
  Matrix vectors;
  int first = 0;
  int count = 0;
};

// Nodewise split of H0; throws GapViolation at the first offending node and
// std::invalid_argument for non-Hermitian nodes.
std::vector<NodeSplit> split_fibers(const MatrixField& H0, const GapSpec& gap);

MatrixField build_pi0(const MatrixField& H0, const GapSpec& gap);

enum class NodeSolver {
  basis,    // divide by eigenvalue differences in the cached H0 eigenbasis
  eigen,    // full-space shifted problem through solve_sylvester_eigen
  contour,  // full-space shifted problem through solve_sylvester_contour
};

struct HierarchyOptions {
  NodeSolver solver = NodeSolver::basis;
  double compat_tol = 1e-8;
  bool check_compat = true;
  double contour_extra_height = 0.0;  // enlarges the contour (uniqueness checks)
};

struct DefectRecord {
  int n = 0;  // lattice index of the order being built
  MatrixField R;
  MatrixField T;
  double comp1 = 0.0;  // sup |[Pi0, R]|
  double comp2 = 0.0;  // max of the two diagonal-block identities
};

struct ProjectorHierarchy {
  FormalSymbol pi;
  FormalSymbol source;
  GapSpec gap;
  int rank = 0;
  std::vector<NodeSplit> split;
  std::vector<DefectRecord> defect_log;

  MatrixField pi0() const { return pi.coeff(0); }
  int order() const { return pi.order(); }
};

ProjectorHierarchy build_hierarchy(const FormalSymbol& H, const GapSpec& gap, int order,
                                   const HierarchyOptions& options = {});

struct DefectTable {
  std::vector<double> h;
  std::vector<double> idempotency;
  std::vector<double> commutator;            // against the full source symbol H
  std::vector<double> commutator_truncated;  // against H_[K]
  SlopeFit idempotency_fit;
  SlopeFit commutator_fit;
  SlopeFit commutator_truncated_fit;
};

// Defects of Pi_[K] # Pi_[K] - Pi_[K] and [H, Pi_[K]]# with h inserted
// numerically; slopes are fitted against t = h^{1/q0}. The formal products
// are carried `extra` lattice steps beyond K (default 2 q0).
DefectTable defect_orders(const ProjectorHierarchy& hier, const std::vector<double>& h_values,
                          int extra = -1);

struct OrthogonalityTable {
  std::vector<double> h;
  std::vector<double> defect;
  SlopeFit fit;
};

// |Pi^a_[K] # Pi^b_[K]| for disjoint selections; identical selections give
// the idempotency defect instead.
OrthogonalityTable orthogonality_defect(const ProjectorHierarchy& a, const ProjectorHierarchy& b,
                                        const std::vector<double>& h_values, int extra = -1);

struct GapScalingRow {
  int j = 0;
  int derivative_order = 0;
  double delta = 0.0;
  double norm = 0.0;
};

struct GapScalingFit {
  int j = 0;
  int derivative_order = 0;
  double exponent = 0.0;  // fitted power of delta
  double bound = 0.0;     // -|alpha| - 2j
};

struct GapScalingResult {
  std::vector<GapScalingRow> rows;
  std::vector<GapScalingFit> fits;
};

// Sup norms of d^alpha Pi_j over |alpha| <= max_derivative, j <= max_order,
// for a family H(delta) whose gap is delta.
GapScalingResult gap_scaling_probe(const std::function<FormalSymbol(double)>& family,
                                   const std::function<GapSpec(double)>& gap_for,
                                   int max_order, int max_derivative,
                                   const std::vector<double>& deltas,
                                   const HierarchyOptions& options = {});

}  // namespace adiaband
