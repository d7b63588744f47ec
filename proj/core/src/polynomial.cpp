#include "adiaband/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace adiaband {

Poly2 Poly2::constant(double c) { return monomial(0, 0, c); }

Poly2 Poly2::monomial(int i, int j, double c) {
  Poly2 p;
  p.add(i, j, c);
  return p;
}

void Poly2::add(int i, int j, double c) {
  if (c == 0.0) return;
  auto key = std::make_pair(i, j);
  double& v = coeffs_[key];
  v += c;
  if (v == 0.0) coeffs_.erase(key);
}

double Poly2::operator()(double s1, double s2) const {
  double r = 0.0;
  for (const auto& [e, c] : coeffs_) r += c * std::pow(s1, e.first) * std::pow(s2, e.second);
  return r;
}

Poly2 Poly2::derivative(int d1, int d2) const {
  Poly2 out;
  for (const auto& [e, c] : coeffs_) {
    if (e.first < d1 || e.second < d2) continue;
    double f = c;
    for (int k = 0; k < d1; ++k) f *= e.first - k;
    for (int k = 0; k < d2; ++k) f *= e.second - k;
    out.add(e.first - d1, e.second - d2, f);
  }
  return out;
}

Poly2 Poly2::swapped() const {
  Poly2 out;
  for (const auto& [e, c] : coeffs_) out.add(e.second, e.first, c);
  return out;
}

int Poly2::degree() const {
  int d = 0;
  for (const auto& [e, c] : coeffs_) d = std::max(d, e.first + e.second);
  return d;
}

Poly2& Poly2::operator+=(const Poly2& o) {
  for (const auto& [e, c] : o.coeffs_) add(e.first, e.second, c);
  return *this;
}

Poly2& Poly2::operator*=(double s) {
  if (s == 0.0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [e, c] : coeffs_) c *= s;
  return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  Poly2 out;
  for (const auto& [ea, ca] : a.coeffs_)
    for (const auto& [eb, cb] : b.coeffs_) out.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return out;
}

}  // namespace adiaband
