#include "adiaband/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adiaband {

FockLadder::FockLadder(int m, int pad) : m_(m), pad_(pad) {
  if (m < 1) throw std::invalid_argument("FockLadder: m must be positive");
  if (pad < 0) throw std::invalid_argument("FockLadder: negative padding");
  const int M = m + pad;
  Matrix a = Matrix::Zero(M, M);
  for (int k = 1; k < M; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const double s = 1.0 / std::sqrt(2.0);
  X_ = s * (a + a.adjoint());
  P_ = Complex(0.0, s) * (a.adjoint() - a);
}

Matrix FockLadder::weyl_monomial(int i, int j) const {
  if (i < 0 || j < 0) throw std::invalid_argument("weyl_monomial: negative exponent");
  const int d = i + j;
  if (d > 2 * pad_ || d > 8)
    throw std::invalid_argument("weyl_monomial: degree " + std::to_string(d) +
                                " too high for Fock padding " + std::to_string(pad_));
  const int M = m_ + pad_;
  std::vector<Matrix> xp(i + 1);
  xp[0] = Matrix::Identity(M, M);
  for (int k = 1; k <= i; ++k) xp[k] = xp[k - 1] * X_;
  Matrix pj = Matrix::Identity(M, M);
  for (int k = 0; k < j; ++k) pj = pj * P_;
  Matrix sum = Matrix::Zero(M, M);
  double binom = 1.0;
  for (int k = 0; k <= i; ++k) {
    sum += binom * (xp[k] * pj * xp[i - k]);
    binom = binom * (i - k) / (k + 1);
  }
  sum /= std::pow(2.0, i);
  return sum.topLeftCorner(m_, m_);
}

}  // namespace adiaband
