#pragma once

// Integrality (reduced + irreducible over Q) of spectral polynomials that
// are monic in lambda. Reducedness and irreducibility are certified through
// univariate specializations z = c; a factorization is exhibited by lifting
// numerical root series and verifying the division exactly.

#include "hq/linalg.hpp"
#include "hq/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hq {

namespace modp {

using u64 = std::uint64_t;
using Poly = std::vector<u64>;  // low to high, trimmed

inline u64 mulm(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

inline u64 powm(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulm(r, a, p);
    a = mulm(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly sub(Poly a, const Poly& b, u64 p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] = (a[k] + p - b[k]) % p;
  trim(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulm(a[i], b[j], p)) % p;
  trim(c);
  return c;
}

inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, u64 p) {
  if (b.empty()) throw std::domain_error("mod-p division by zero");
  if (a.size() < b.size()) return {{}, a};
  const u64 inv = invm(b.back(), p);
  Poly q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    const u64 f = mulm(a[k + b.size() - 1], inv, p);
    q[k] = f;
    if (!f) continue;
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] = (a[k + i] + p - mulm(f, b[i], p)) % p;
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly make_monic(Poly f, u64 p) {
  if (f.empty()) return f;
  const u64 inv = invm(f.back(), p);
  for (auto& v : f) v = mulm(v, inv, p);
  return f;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
  while (!b.empty()) {
    Poly r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

inline Poly derivative(const Poly& f, u64 p) {
  Poly d;
  for (std::size_t k = 1; k < f.size(); ++k) d.push_back(mulm(f[k], k % p, p));
  trim(d);
  return d;
}

/// x^e mod f
inline Poly pow_x(u64 e, const Poly& f, u64 p) {
  Poly result{1};
  Poly base = divmod(Poly{0, 1}, f, p).second;
  while (e) {
    if (e & 1) result = divmod(mul(result, base, p), f, p).second;
    base = divmod(mul(base, base, p), f, p).second;
    e >>= 1;
  }
  return result;
}

/// Compose g(h) mod f (used to iterate the Frobenius).
inline Poly compose_mod(const Poly& g, const Poly& h, const Poly& f, u64 p) {
  Poly acc;
  for (std::size_t k = g.size(); k-- > 0;) {
    acc = divmod(mul(acc, h, p), f, p).second;
    if (g[k]) {
      if (acc.empty()) acc.push_back(0);
      acc[0] = (acc[0] + g[k]) % p;
      trim(acc);
    }
  }
  return acc;
}

/// Degrees of the irreducible factors of a monic squarefree f.
inline std::vector<int> factor_degrees(Poly f, u64 p) {
  std::vector<int> degs;
  const Poly xp = pow_x(p, f, p);
  Poly h = xp;  // x^{p^i} mod f
  for (int i = 1; 2 * i <= deg(f); ++i) {
    if (i > 1) h = compose_mod(h, xp, f, p);  // x^{p^i} = (x^{p^{i-1}})^p composed; valid mod f
    const Poly g = gcd(f, sub(h, Poly{0, 1}, p), p);
    if (deg(g) > 0) {
      for (int k = 0; k < deg(g) / i; ++k) degs.push_back(i);
      f = divmod(f, g, p).first;
      h = divmod(h, f, p).second;
    }
  }
  if (deg(f) > 0) degs.push_back(deg(f));
  return degs;
}

/// Reduction of a rational polynomial mod p; nullopt if p divides a denominator.
inline std::optional<Poly> reduce(const QPoly& q, u64 p) {
  Poly f;
  for (const auto& c : q.coeffs()) {
    const Integer den = c.get_den();
    const u64 dm = mpz_fdiv_ui(den.get_mpz_t(), p);
    if (dm == 0) return std::nullopt;
    Integer num = c.get_num();
    const u64 nm = mpz_fdiv_ui(num.get_mpz_t(), p);
    f.push_back(mulm(nm, invm(dm, p), p));
  }
  trim(f);
  return f;
}

inline const std::vector<u64>& primes() {
  static const std::vector<u64> ps{1000003, 1000033, 1000037, 1000039, 1000081, 1000099, 1000117, 1000121,
                                   1000133, 1000151, 1000159, 1000171, 1000183, 1000187, 1000193, 1000199};
  return ps;
}

}  // namespace modp

enum class Integrality { integral, not_integral, undetermined };

inline const char* to_string(Integrality v) {
  switch (v) {
    case Integrality::integral: return "integral";
    case Integrality::not_integral: return "not_integral";
    case Integrality::undetermined: return "undetermined";
  }
  return "?";
}

struct IntegralityResult {
  Integrality verdict = Integrality::undetermined;
  bool reduced = false;            // certified squarefree
  bool irreducible = false;        // certified irreducible over Q
  std::string reason;
  std::optional<Rational> certificate_z;  // specialization proving reducedness / irreducibility
  std::optional<BiPoly> factor;           // exhibited proper factor when not integral
};

struct IntegralityOptions {
  int specializations = 24;
  int lift_attempts = 4;
  std::int64_t max_denominator = 100000;
};

namespace detail {

inline std::vector<Rational> specialization_points(std::size_t count) {
  std::vector<Rational> pts;
  // 0, 1, -1, 2, -2, ... then halves; deterministic, small height
  for (long k = 0; pts.size() < count; ++k) {
    pts.emplace_back(k);
    if (k) pts.emplace_back(-k);
  }
  pts.resize(count);
  return pts;
}

/// Subset sums strictly between 0 and total of the given part sizes.
inline std::set<int> proper_subset_sums(const std::vector<int>& parts, int total) {
  std::set<int> sums{0};
  for (int d : parts) {
    std::set<int> next = sums;
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  std::set<int> out;
  for (int s : sums)
    if (s > 0 && s < total) out.insert(s);
  return out;
}

inline bool squarefree(const QPoly& f) { return gcd(f, f.derivative()).degree() == 0; }

/// Truncated power series of the roots of P(c0 + t, lambda), to order `order`.
inline std::optional<std::vector<std::vector<Complex>>> root_series(const BiPoly& shifted, int order) {
  const int r = shifted.lambda_degree();
  // coefficients as complex series in t
  std::vector<std::vector<Complex>> pc(r + 1);
  for (int k = 0; k <= r; ++k)
    for (int m = 0; m <= order; ++m) pc[k].push_back(Complex(shifted.coeffs[k].coeff(m).get_d(), 0.0));
  // roots at t = 0 via companion matrix
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(r, r);
  for (int i = 1; i < r; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < r; ++i) comp(i, r - 1) = -pc[i][0];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  std::vector<std::vector<Complex>> roots;
  auto eval_series = [&](const std::vector<Complex>& rho, int upto) {
    // P(t, rho(t)) truncated to t^upto, Horner in lambda
    std::vector<Complex> acc(upto + 1, Complex(0));
    for (int k = r; k >= 0; --k) {
      std::vector<Complex> prod(upto + 1, Complex(0));
      for (int a = 0; a <= upto; ++a) {
        if (acc[a] == Complex(0)) continue;
        for (int b = 0; a + b <= upto && b < static_cast<int>(rho.size()); ++b) prod[a + b] += acc[a] * rho[b];
      }
      for (int a = 0; a <= upto; ++a) prod[a] += pc[k][a];
      acc = std::move(prod);
    }
    return acc;
  };
  for (int i = 0; i < r; ++i) {
    Complex z0 = es.eigenvalues()(i);
    // Newton polish at t = 0
    for (int it = 0; it < 20; ++it) {
      Complex v(0), dv(0);
      for (int k = r; k >= 0; --k) {
        dv = dv * z0 + v;
        v = v * z0 + pc[k][0];
      }
      if (dv == Complex(0)) break;
      z0 -= v / dv;
    }
    Complex dp(0), vv(0);
    for (int k = r; k >= 0; --k) {
      dp = dp * z0 + vv;
      vv = vv * z0 + pc[k][0];
    }
    if (std::abs(dp) < 1e-10) return std::nullopt;  // repeated root at t = 0
    std::vector<Complex> rho{z0};
    for (int m = 1; m <= order; ++m) {
      rho.push_back(Complex(0));
      const auto e = eval_series(rho, m);
      rho[m] = -e[m] / dp;
    }
    roots.push_back(std::move(rho));
  }
  return roots;
}

}  // namespace detail

/// Integrality of P(z, lambda) monic in lambda over Q.
inline IntegralityResult is_integral(const BiPoly& poly, const IntegralityOptions& opt = {}) {
  IntegralityResult res;
  const int r = poly.lambda_degree();
  if (r < 1) throw std::invalid_argument("spectral polynomial must have positive lambda-degree");
  if (!(poly.coeffs[r] == QPoly::constant(Rational(1))))
    throw std::invalid_argument("spectral polynomial must be monic in lambda");
  if (r == 1) {
    res.verdict = Integrality::integral;
    res.reduced = res.irreducible = true;
    res.reason = "degree one in lambda";
    return res;
  }
  const int zdeg = std::max(0, poly.z_degree());

  // reducedness: discriminant has z-degree <= (2r-2) * zdeg; more squarefree
  // failures than that force it to vanish identically
  const int disc_bound = (2 * r - 2) * zdeg;
  const auto pts = detail::specialization_points(static_cast<std::size_t>(std::max(opt.specializations, disc_bound + 1)));
  std::vector<Rational> good;
  for (const auto& c : pts)
    if (detail::squarefree(poly.specialize(c))) good.push_back(c);
  if (good.empty()) {
    res.verdict = Integrality::not_integral;
    res.reason = "not reduced: every one of " + std::to_string(pts.size()) +
                 " specializations is non-squarefree, exceeding the discriminant degree bound " +
                 std::to_string(disc_bound);
    return res;
  }
  res.reduced = true;
  res.certificate_z = good.front();

  // irreducibility: intersect admissible factor degrees over (c, p)
  std::set<int> admissible;
  for (int d = 1; d < r; ++d) admissible.insert(d);
  for (const auto& c : good) {
    const QPoly spec = poly.specialize(c);
    for (auto p : modp::primes()) {
      auto f = modp::reduce(spec, p);
      if (!f || modp::deg(*f) != r) continue;
      if (modp::deg(modp::gcd(*f, modp::derivative(*f, p), p)) != 0) continue;
      const auto degs = modp::factor_degrees(modp::make_monic(*f, p), p);
      const auto sums = detail::proper_subset_sums(degs, r);
      std::set<int> next;
      for (int d : admissible)
        if (sums.count(d)) next.insert(d);
      admissible = std::move(next);
      if (admissible.empty()) {
        res.irreducible = true;
        res.verdict = Integrality::integral;
        res.certificate_z = c;
        res.reason = "reduced and irreducible (mod-p factor degree patterns of specializations exclude every factor degree)";
        return res;
      }
    }
  }

  // factor search: lift root series at a few squarefree points, try subsets
  Rational w = 0;  // max_j deg p_j / j
  for (int j = 1; j <= r; ++j) {
    const int dj = poly.coeffs[r - j].degree();
    if (dj < 0) continue;
    Rational q(dj, j);
    q.canonicalize();
    if (q > w) w = q;
  }
  for (int attempt = 0; attempt < opt.lift_attempts && attempt < static_cast<int>(good.size()); ++attempt) {
    const Rational c0 = good[attempt];
    BiPoly shifted;
    for (const auto& q : poly.coeffs) shifted.coeffs.push_back(q.shift(c0));
    const Rational rw = w * r;
    const int order = static_cast<int>(mpz_class(rw.get_num() / rw.get_den()).get_si()) + 2;
    const auto series = detail::root_series(shifted, order);
    if (!series) continue;
    for (int d : admissible) {
      if (2 * d > r) continue;
      std::vector<int> idx(d);
      for (int i = 0; i < d; ++i) idx[i] = i;
      while (true) {
        // G = prod_{k in idx} (lambda - rho_k(t)), coefficient series in t
        std::vector<std::vector<Complex>> g(1, std::vector<Complex>(order + 1, Complex(0)));
        g[0][0] = 1.0;
        for (int k : idx) {
          std::vector<std::vector<Complex>> ng(g.size() + 1, std::vector<Complex>(order + 1, Complex(0)));
          for (std::size_t e = 0; e < g.size(); ++e)
            for (int a = 0; a <= order; ++a) {
              ng[e + 1][a] += g[e][a];
              for (int b = 0; a + b <= order; ++b) ng[e][a + b] -= g[e][a] * (*series)[k][b];
            }
          g = std::move(ng);
        }
        bool plausible = true;
        BiPoly cand;
        for (std::size_t e = 0; e < g.size() && plausible; ++e) {
          const int bound_k = static_cast<int>(d - e);  // coefficient of lambda^e is an elementary symmetric fn of degree d-e
          Rational bq = w * bound_k;
          const long bound = mpz_class(bq.get_num() / bq.get_den()).get_si();
          std::vector<Rational> coeffs;
          for (int a = 0; a <= order; ++a) {
            const Complex v = g[e][a];
            const double scale = std::max(1.0, std::abs(v));
            if (std::abs(v.imag()) > 1e-6 * scale) {
              plausible = false;
              break;
            }
            if (a > bound) {
              if (std::abs(v) > 1e-6) plausible = false;
              continue;
            }
            coeffs.push_back(approximate_rational(v.real(), opt.max_denominator));
          }
          if (plausible) cand.coeffs.push_back(QPoly(coeffs).shift(Rational(-c0)));
        }
        if (plausible) {
          cand.coeffs.back() = QPoly::constant(Rational(1));
          const auto [quo, rem] = divmod_monic(poly, cand);
          bool exact = true;
          for (const auto& q : rem.coeffs)
            if (!q.is_zero()) exact = false;
          if (exact) {
            res.verdict = Integrality::not_integral;
            res.factor = cand;
            res.reason = "reducible: exhibited a factor of lambda-degree " + std::to_string(d);
            return res;
          }
        }
        // next combination
        int pos = d - 1;
        while (pos >= 0 && idx[pos] == r - d + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }
  res.verdict = Integrality::undetermined;
  res.reason = "reduced; no irreducibility certificate and no factor found";
  return res;
}

}  // namespace hq
