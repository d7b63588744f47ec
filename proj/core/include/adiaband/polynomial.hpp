#pragma once

#include <map>
#include <string>
#include <utility>

namespace adiaband {

// Real polynomial in two variables, sum c_ij s1^i s2^j.
class Poly2 {
 public:
  Poly2() = default;
  static Poly2 constant(double c);
  static Poly2 monomial(int i, int j, double c = 1.0);

  double operator()(double s1, double s2) const;
  Poly2 derivative(int d1, int d2) const;
  // q(s1, s2) = p(s2, s1).
  Poly2 swapped() const;
  int degree() const;
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<std::pair<int, int>, double>& coeffs() const { return coeffs_; }

  Poly2& operator+=(const Poly2& o);
  Poly2& operator*=(double s);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator*(double s, Poly2 a) { return a *= s; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);

 private:
  void add(int i, int j, double c);
  std::map<std::pair<int, int>, double> coeffs_;
};

}  // namespace adiaband
