#include "adiaband/formal_symbol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace adiaband {

FormalSymbol::FormalSymbol(const PhaseSpaceGrid& grid, int rows, int cols, int q0, int order)
    : grid_(grid), rows_(rows), cols_(cols), q0_(q0), order_(order) {
  grid_.validate();
  if (rows < 1 || cols < 1) throw std::invalid_argument("FormalSymbol: empty matrix shape");
  if (q0 < 1) throw std::invalid_argument("FormalSymbol: q0 must be positive");
  if (order < 0) throw std::invalid_argument("FormalSymbol: negative truncation");
}

const MatrixField* FormalSymbol::find(int n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? nullptr : &it->second;
}

MatrixField FormalSymbol::coeff(int n) const {
  if (const auto* f = find(n)) return *f;
  return MatrixField(grid_, rows_, cols_);
}

void FormalSymbol::set(int n, MatrixField c) {
  if (n < 0 || n > order_)
    throw std::invalid_argument("FormalSymbol::set: index " + std::to_string(n) +
                                " outside [0," + std::to_string(order_) + "]");
  if (!(c.grid() == grid_)) throw GridMismatch("FormalSymbol::set: grid differs");
  if (c.rows() != rows_ || c.cols() != cols_)
    throw std::invalid_argument("FormalSymbol::set: block shape differs");
  terms_[n] = std::move(c);
}

void FormalSymbol::add_to(int n, const MatrixField& c) {
  auto it = terms_.find(n);
  if (it == terms_.end())
    set(n, c);
  else
    it->second += c;
}

FormalSymbol FormalSymbol::truncated(int order) const {
  FormalSymbol out(grid_, rows_, cols_, q0_, std::min(order, order_));
  for (const auto& [n, c] : terms_)
    if (n <= order) out.terms_.emplace(n, c);
  return out;
}

FormalSymbol FormalSymbol::with_order(int order) const {
  FormalSymbol out = truncated(order);
  out.order_ = order;
  return out;
}

FormalSymbol FormalSymbol::adjoint() const {
  FormalSymbol out(grid_, cols_, rows_, q0_, order_);
  for (const auto& [n, c] : terms_) out.terms_.emplace(n, c.adjoint());
  return out;
}

MatrixField FormalSymbol::evaluate(double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("FormalSymbol::evaluate: h must be positive");
  MatrixField out(grid_, rows_, cols_);
  for (const auto& [n, c] : terms_) {
    MatrixField t = c;
    t *= std::pow(h, exponent(n));
    out += t;
  }
  return out;
}

void FormalSymbol::check_compatible(const FormalSymbol& other, const char* where) const {
  if (!(grid_ == other.grid_)) throw GridMismatch(std::string(where) + ": grids differ");
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument(std::string(where) + ": block shapes differ");
  if (q0_ != other.q0_) throw std::invalid_argument(std::string(where) + ": lattices differ");
}

FormalSymbol& FormalSymbol::operator+=(const FormalSymbol& other) {
  check_compatible(other, "FormalSymbol +=");
  order_ = std::min(order_, other.order_);
  for (auto it = terms_.begin(); it != terms_.end();)
    it = it->first > order_ ? terms_.erase(it) : std::next(it);
  for (const auto& [n, c] : other.terms_)
    if (n <= order_) add_to(n, c);
  return *this;
}

FormalSymbol& FormalSymbol::operator-=(const FormalSymbol& other) {
  FormalSymbol neg = other;
  neg *= Complex(-1.0, 0.0);
  return *this += neg;
}

FormalSymbol& FormalSymbol::operator*=(Complex s) {
  for (auto& [n, c] : terms_) c *= s;
  return *this;
}

FormalSymbol operator+(FormalSymbol a, const FormalSymbol& b) { return a += b; }
FormalSymbol operator-(FormalSymbol a, const FormalSymbol& b) { return a -= b; }
FormalSymbol operator*(Complex s, FormalSymbol a) { return a *= s; }

int lattice_index(double K, int q0) {
  if (q0 < 1) throw std::invalid_argument("lattice_index: q0 must be positive");
  const double v = K * q0;
  const double r = std::round(v);
  if (!(K >= 0.0) || std::abs(v - r) > 1e-9)
    throw std::invalid_argument("truncation K=" + std::to_string(K) +
                                " is not a nonnegative multiple of 1/" + std::to_string(q0));
  return static_cast<int>(r);
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Memoized mixed derivatives of one coefficient field.
class DerivativeTable {
 public:
  explicit DerivativeTable(const MatrixField& f) : f_(f) {}
  const MatrixField& get(int ax, int axi) {
    auto key = std::make_pair(ax, axi);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    MatrixField d;
    if (ax == 0 && axi == 0)
      d = f_;
    else if (ax > 0)
      d = derive(get(0, axi), ax, 0);
    else
      d = derive(f_, 0, axi);
    return cache_.emplace(key, std::move(d)).first->second;
  }

 private:
  const MatrixField& f_;
  std::map<std::pair<int, int>, MatrixField> cache_;
};

void check_product_args(const FormalSymbol& a, const FormalSymbol& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("moyal_product: grids differ");
  if (a.cols() != b.rows()) throw std::invalid_argument("moyal_product: inner dimensions differ");
  if (a.q0() != b.q0()) throw std::invalid_argument("moyal_product: lattices differ");
}

// Accumulates the contributions to every lattice index in [lo, hi].
std::map<int, MatrixField> moyal_terms(const FormalSymbol& a, const FormalSymbol& b, int lo,
                                       int hi) {
  check_product_args(a, b);
  const int q0 = a.q0();
  std::map<int, DerivativeTable> da, db;
  for (const auto& [n, c] : a.terms()) da.emplace(n, DerivativeTable(c));
  for (const auto& [n, c] : b.terms()) db.emplace(n, DerivativeTable(c));

  std::map<int, MatrixField> out;
  for (const auto& [na, ca] : a.terms()) {
    for (const auto& [nb, cb] : b.terms()) {
      for (int j = 0; na + nb + j * q0 <= hi; ++j) {
        const int n = na + nb + j * q0;
        if (n < lo) continue;
        // (1/j!) (-i/2)^j sum_s C(j,s) (-1)^s d_xi^{j-s} d_x^s A . d_x^{j-s} d_xi^s B
        const Complex pref = std::pow(Complex(0.0, -0.5), j) / factorial(j);
        for (int s = 0; s <= j; ++s) {
          const double w = binomial(j, s) * ((s % 2) ? -1.0 : 1.0);
          MatrixField t = multiply(da.at(na).get(s, j - s), db.at(nb).get(j - s, s));
          t *= pref * w;
          auto it = out.find(n);
          if (it == out.end())
            out.emplace(n, std::move(t));
          else
            it->second += t;
        }
      }
    }
  }
  return out;
}

}  // namespace

FormalSymbol moyal_product(const FormalSymbol& a, const FormalSymbol& b, int order) {
  if (order < 0) throw std::invalid_argument("moyal_product: negative truncation");
  FormalSymbol out(a.grid(), a.rows(), b.cols(), a.q0(), order);
  for (auto& [n, c] : moyal_terms(a, b, 0, order)) out.set(n, std::move(c));
  return out;
}

MatrixField moyal_coefficient(const FormalSymbol& a, const FormalSymbol& b, int n) {
  auto terms = moyal_terms(a, b, n, n);
  auto it = terms.find(n);
  if (it == terms.end()) return MatrixField(a.grid(), a.rows(), b.cols());
  return std::move(it->second);
}

FormalSymbol moyal_commutator(const FormalSymbol& a, const FormalSymbol& b, int order) {
  return moyal_product(a, b, order) - moyal_product(b, a, order);
}

MatrixField poisson_power(const MatrixField& f, const MatrixField& g, int j) {
  require_same_grid(f, g, "poisson_power");
  MatrixField out(f.grid(), f.rows(), g.cols());
  for (int s = 0; s <= j; ++s) {
    MatrixField t = multiply(derive(f, s, j - s), derive(g, j - s, s));
    t *= binomial(j, s) * ((s % 2) ? -1.0 : 1.0);
    out += t;
  }
  return out;
}

}  // namespace adiaband
