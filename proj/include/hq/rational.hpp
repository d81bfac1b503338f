#pragma once

// Exact rational scalars backed by GMP, plus the parsing and formatting
// helpers shared by the JSON layer and the CLI.

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

namespace hq {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

/// Parses "3/2", "-4", "0.125" or "1e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (s.find_first_of(".eE") != std::string::npos) {
    // decimal literal: mantissa digits and a base-10 exponent, read exactly
    std::size_t epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) {
      const std::string e = s.substr(epos + 1);
      auto [ptr, ec] = std::from_chars(e.data() + (e.size() && e[0] == '+' ? 1 : 0), e.data() + e.size(), exp10);
      if (ec != std::errc() || ptr != e.data() + e.size())
        throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant.erase(mant.begin());
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
      exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed decimal literal '" + s + "'");
    Rational q{Integer(digits, 10)};
    Integer ten = 10;
    Integer scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exp10)));
    if (exp10 >= 0)
      q *= scale;
    else
      q /= scale;
    if (neg) q = -q;
    q.canonicalize();
    return q;
  }

  if (s.find_first_not_of("+-0123456789/") != std::string::npos)
    throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (s[0] == '+') s.erase(s.begin());
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

/// Shortest decimal that round-trips the double; locale independent.
inline std::string to_string(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
  double x = 0.0;
  std::string s(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // fall back to exact parse for "3/2"-style input
    return parse_rational(s).get_d();
  }
  return x;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

/// Exact value of a finite double.
inline Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value cannot be made exact");
  Rational q(x);
  q.canonicalize();
  return q;
}

/// Best rational approximation with denominator at most max_den
/// (continued fractions).
inline Rational approximate_rational(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value cannot be approximated");
  const bool neg = x < 0;
  double y = std::fabs(x);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(y);
    if (a > 9.0e15) break;
    Integer ai = static_cast<long>(a);
    Integer p2 = ai * p1 + p0;
    Integer q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

// Scalar traits: the library is written once over Rational (exact mode)
// and Complex (floating mode).
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static const char* name() { return "exact"; }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
  static bool is_zero(const Rational& x, double /*tol*/) { return sgn(x) == 0; }
  static Rational conj(const Rational& x) { return x; }
  static Rational from_rational(const Rational& x) { return x; }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static const char* name() { return "float"; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static bool is_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static Complex from_rational(const Rational& x) { return Complex(x.get_d(), 0.0); }
};

template <class S>
concept HqScalar = std::is_same_v<S, Rational> || std::is_same_v<S, Complex>;

}  // namespace hq
