#pragma once

#include "adiaband/types.hpp"

namespace adiaband {

// Harmonic-oscillator ladder on the first m Hermite functions. Products are
// formed at size m + pad and cropped, so every cropped entry of a monomial of
// degree <= 2*pad equals the exact infinite-matrix entry.
class FockLadder {
 public:
  explicit FockLadder(int m, int pad = 4);

  int m() const { return m_; }
  int pad() const { return pad_; }

  // Cropped position and momentum, X = (a + a^*)/sqrt2, P = i(a^* - a)/sqrt2.
  Matrix x() const { return X_.topLeftCorner(m_, m_); }
  Matrix p() const { return P_.topLeftCorner(m_, m_); }

  // Weyl quantization of x^i xi^j (full symmetrization), cropped to m x m:
  // 2^-i sum_k C(i,k) X^k P^j X^(i-k).
  Matrix weyl_monomial(int i, int j) const;

 private:
  int m_;
  int pad_;
  Matrix X_;
  Matrix P_;
};

}  // namespace adiaband
