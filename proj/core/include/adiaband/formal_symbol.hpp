#pragma once

#include <map>

#include "adiaband/matrix_field.hpp"

namespace adiaband {

// Truncated formal series sum_n h^{n/q0} C_n with integer lattice index
// 0 <= n <= order(). Absent indices are zero.
class FormalSymbol {
 public:
  FormalSymbol() = default;
  FormalSymbol(const PhaseSpaceGrid& grid, int rows, int cols, int q0 = 1, int order = 0);

  const PhaseSpaceGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int q0() const { return q0_; }
  int order() const { return order_; }
  double exponent(int n) const { return static_cast<double>(n) / q0_; }

  bool has(int n) const { return terms_.count(n) != 0; }
  const MatrixField* find(int n) const;
  // Coefficient at lattice index n, zero when absent.
  MatrixField coeff(int n) const;
  const std::map<int, MatrixField>& terms() const { return terms_; }

  void set(int n, MatrixField c);
  void add_to(int n, const MatrixField& c);

  FormalSymbol truncated(int order) const;
  FormalSymbol with_order(int order) const;
  FormalSymbol adjoint() const;

  // Numeric resummation sum_n h^{n/q0} C_n.
  MatrixField evaluate(double h) const;

  FormalSymbol& operator+=(const FormalSymbol& other);
  FormalSymbol& operator-=(const FormalSymbol& other);
  FormalSymbol& operator*=(Complex s);

 private:
  void check_compatible(const FormalSymbol& other, const char* where) const;

  PhaseSpaceGrid grid_{};
  int rows_ = 0;
  int cols_ = 0;
  int q0_ = 1;
  int order_ = 0;
  std::map<int, MatrixField> terms_;
};

FormalSymbol operator+(FormalSymbol a, const FormalSymbol& b);
FormalSymbol operator-(FormalSymbol a, const FormalSymbol& b);
FormalSymbol operator*(Complex s, FormalSymbol a);

// Converts a truncation exponent to its lattice index; throws when K is not
// a multiple of 1/q0.
int lattice_index(double K, int q0);

// Moyal product a # b truncated at lattice index `order`. The j-th term is
// (1/j!) (-i/2)^j P^j(a_na, b_nb) at index na + nb + j q0, where
// P(f,g) = d_xi f d_x g - d_x f d_xi g with matrix order kept.
FormalSymbol moyal_product(const FormalSymbol& a, const FormalSymbol& b, int order);

// Only the lattice-index-n coefficient of a # b.
MatrixField moyal_coefficient(const FormalSymbol& a, const FormalSymbol& b, int n);

FormalSymbol moyal_commutator(const FormalSymbol& a, const FormalSymbol& b, int order);

// P^j(f, g) for single fields, without the (1/j!)(-i/2)^j prefactor.
MatrixField poisson_power(const MatrixField& f, const MatrixField& g, int j);

}  // namespace adiaband
