#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace adiaband {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Runtime failures that carry numerical meaning. Precondition violations on
// arguments are reported as std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Raised when the spectral gap assumption breaks at some phase-space node.
class GapViolation : public Error {
 public:
  GapViolation(const std::string& what, double x, double xi)
      : Error(what), x_(x), xi_(xi) {}
  double x() const { return x_; }
  double xi() const { return xi_; }

 private:
  double x_;
  double xi_;
};

class ContourError : public Error {
 public:
  using Error::Error;
};

class CompatibilityError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class GaugeObstruction : public Error {
 public:
  using Error::Error;
};

}  // namespace adiaband
