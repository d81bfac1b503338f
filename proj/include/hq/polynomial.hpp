#pragma once

// Dense univariate polynomials (coefficients low to high) and bivariate
// polynomials stored as polynomials in lambda with coefficients in z.

#include "hq/rational.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hq {

template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
  static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
  static Poly monomial(const T& v, std::size_t k) {
    std::vector<T> c(k + 1, T(0));
    c[k] = v;
    return Poly(std::move(c));
  }
  /// z - a
  static Poly linear_root(const T& a) { return Poly(std::vector<T>{T(-a), T(1)}); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  T operator()(const T& x) const {
    T acc(0);
    for (std::size_t k = c_.size(); k-- > 0;) {
      acc *= x;
      acc += c_[k];
    }
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Poly& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<long>(k));
    return Poly(std::move(d));
  }

  /// Quotient and remainder by a nonzero divisor (field coefficients).
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    if (degree() < d.degree()) return {Poly(), *this};
    std::vector<T> rem = c_;
    std::vector<T> q(c_.size() - d.c_.size() + 1, T(0));
    const T lead = d.leading();
    for (std::size_t k = q.size(); k-- > 0;) {
      const T f = rem[k + d.c_.size() - 1] / lead;
      q[k] = f;
      for (std::size_t i = 0; i < d.c_.size(); ++i) rem[k + i] -= f * d.c_[i];
    }
    rem.resize(d.c_.size() - 1);
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }

  Poly pow(unsigned k) const {
    Poly p = constant(T(1));
    for (unsigned i = 0; i < k; ++i) p *= *this;
    return p;
  }

  /// p(z + s)
  Poly shift(const T& s) const {
    Poly out;
    const Poly lin(std::vector<T>{s, T(1)});
    for (std::size_t k = c_.size(); k-- > 0;) {
      out *= lin;
      out += constant(c_[k]);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }
  std::vector<T> c_;
};

using QPoly = Poly<Rational>;

inline QPoly monic(const QPoly& p) {
  if (p.is_zero()) return p;
  return p * Rational(1 / p.leading());
}

inline QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// Multiplicity of the root a (infinite for the zero polynomial).
inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

inline int vanishing_order(const QPoly& p, const Rational& a) {
  if (p.is_zero()) return kInfiniteOrder;
  int k = 0;
  QPoly q = p;
  const QPoly lin = QPoly::linear_root(a);
  while (true) {
    auto [quo, rem] = q.divmod(lin);
    if (!rem.is_zero()) return k;
    q = std::move(quo);
    ++k;
  }
}

/// Newton divided-difference interpolation through (xs[k], ys[k]).
template <class T>
Poly<T> interpolate(const std::vector<T>& xs, const std::vector<T>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: size mismatch");
  const std::size_t n = xs.size();
  std::vector<T> dd = ys;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t k = n - 1; k >= level; --k) {
      const T den = xs[k] - xs[k - level];
      if (den == T(0)) throw std::invalid_argument("interpolate: repeated node");
      dd[k] = (dd[k] - dd[k - 1]) / den;
      if (k == level) break;
    }
  Poly<T> p;
  for (std::size_t k = n; k-- > 0;) {
    p *= Poly<T>::linear_root(xs[k]);
    p += Poly<T>::constant(dd[k]);
  }
  return p;
}

inline std::string to_string(const QPoly& p, const std::string& var = "z") {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    const Rational& c = p.coeffs()[k];
    if (sgn(c) == 0) continue;
    std::string term = to_string(Rational(abs(c)));
    if (k > 0) {
      if (abs(c) == 1) term.clear();
      else term += "*";
      term += var;
      if (k > 1) term += "^" + std::to_string(k);
    }
    if (out.empty())
      out = (sgn(c) < 0 ? "-" : "") + term;
    else
      out += (sgn(c) < 0 ? " - " : " + ") + term;
  }
  return out;
}

/// Polynomial in lambda whose coefficients are polynomials in z:
/// P(z, lambda) = sum_k coeffs[k](z) lambda^k.
struct BiPoly {
  std::vector<QPoly> coeffs;

  int lambda_degree() const {
    for (std::size_t k = coeffs.size(); k-- > 0;)
      if (!coeffs[k].is_zero()) return static_cast<int>(k);
    return -1;
  }
  int z_degree() const {
    int d = -1;
    for (const auto& c : coeffs) d = std::max(d, c.degree());
    return d;
  }

  Rational operator()(const Rational& z, const Rational& lambda) const {
    Rational acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      acc *= lambda;
      acc += coeffs[k](z);
    }
    return acc;
  }

  /// Univariate polynomial in lambda at fixed z.
  QPoly specialize(const Rational& z) const {
    std::vector<Rational> c;
    for (const auto& q : coeffs) c.push_back(q(z));
    return QPoly(std::move(c));
  }

  /// Partial derivative in lambda.
  BiPoly d_lambda() const {
    BiPoly out;
    for (std::size_t k = 1; k < coeffs.size(); ++k) out.coeffs.push_back(coeffs[k] * Rational(static_cast<long>(k)));
    return out;
  }

  friend bool operator==(const BiPoly& a, const BiPoly& b) {
    const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t k = 0; k < n; ++k) {
      const QPoly x = k < a.coeffs.size() ? a.coeffs[k] : QPoly();
      const QPoly y = k < b.coeffs.size() ? b.coeffs[k] : QPoly();
      if (!(x == y)) return false;
    }
    return true;
  }
};

inline BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly c;
  if (a.coeffs.empty() || b.coeffs.empty()) return c;
  c.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, QPoly());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return c;
}

/// Division by a polynomial monic in lambda; returns (quotient, remainder).
inline std::pair<BiPoly, BiPoly> divmod_monic(const BiPoly& p, const BiPoly& d) {
  const int dd = d.lambda_degree();
  if (dd < 0 || !(d.coeffs[dd] == QPoly::constant(Rational(1))))
    throw std::invalid_argument("divisor must be monic in lambda");
  BiPoly rem = p;
  const int pd = p.lambda_degree();
  BiPoly q;
  if (pd < dd) return {q, rem};
  q.coeffs.assign(static_cast<std::size_t>(pd - dd + 1), QPoly());
  for (int k = pd - dd; k >= 0; --k) {
    const QPoly f = rem.coeffs[k + dd];
    q.coeffs[k] = f;
    if (f.is_zero()) continue;
    for (int i = 0; i <= dd; ++i) rem.coeffs[k + i] -= f * d.coeffs[i];
  }
  return {q, rem};
}

inline std::string to_string(const BiPoly& p) {
  std::string out;
  for (std::size_t k = p.coeffs.size(); k-- > 0;) {
    if (p.coeffs[k].is_zero()) continue;
    std::string term = "(" + to_string(p.coeffs[k]) + ")";
    if (k > 0) term += "*lambda" + (k > 1 ? "^" + std::to_string(k) : std::string());
    out += (out.empty() ? "" : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace hq
