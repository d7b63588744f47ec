#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "adiaband/grid.hpp"
#include "adiaband/types.hpp"

namespace adiaband {

// One rows x cols complex matrix per grid node, stored node-major with each
// node block in column-major order (so node(k) maps straight onto Eigen).
class MatrixField {
 public:
  using NodeMap = Eigen::Map<Matrix>;
  using ConstNodeMap = Eigen::Map<const Matrix>;

  MatrixField() = default;
  MatrixField(const PhaseSpaceGrid& grid, int rows, int cols);

  static MatrixField constant(const PhaseSpaceGrid& grid, const Matrix& value);
  static MatrixField from_function(const PhaseSpaceGrid& grid, int rows, int cols,
                                   const std::function<Matrix(double, double)>& f);
  static MatrixField identity(const PhaseSpaceGrid& grid, int m);

  const PhaseSpaceGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nodes() const { return grid_.nodes(); }
  std::size_t block() const { return static_cast<std::size_t>(rows_) * cols_; }
  bool empty() const { return data_.empty(); }

  NodeMap node(std::size_t k) { return NodeMap(data_.data() + k * block(), rows_, cols_); }
  ConstNodeMap node(std::size_t k) const {
    return ConstNodeMap(data_.data() + k * block(), rows_, cols_);
  }
  NodeMap at(int i, int j) { return node(grid_.index(i, j)); }
  ConstNodeMap at(int i, int j) const { return node(grid_.index(i, j)); }

  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  MatrixField& operator+=(const MatrixField& other);
  MatrixField& operator-=(const MatrixField& other);
  MatrixField& operator*=(Complex s);

  MatrixField adjoint() const;
  bool all_finite() const;

 private:
  PhaseSpaceGrid grid_{};
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> data_;
};

MatrixField operator+(MatrixField a, const MatrixField& b);
MatrixField operator-(MatrixField a, const MatrixField& b);
MatrixField operator*(Complex s, MatrixField a);

void require_same_grid(const MatrixField& a, const MatrixField& b, const char* where);

// Nodewise matrix product and commutator.
MatrixField multiply(const MatrixField& a, const MatrixField& b);
MatrixField multiply(const MatrixField& a, const MatrixField& b, const MatrixField& c);
MatrixField commutator(const MatrixField& a, const MatrixField& b);

// d_x^ax d_xi^axi by finite differences at the grid's accuracy order.
MatrixField derive(const MatrixField& f, int ax, int axi);

// Operator 2-norm of a single matrix (Euclidean norm for vectors).
double operator_norm(const Eigen::Ref<const Matrix>& a);

// Supremum over interior nodes of the nodewise operator norm.
double sup_norm(const MatrixField& f);

}  // namespace adiaband
