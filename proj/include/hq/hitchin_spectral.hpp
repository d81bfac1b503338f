#pragma once

// Characteristic polynomial of a residue tuple, Hitchin-base membership by
// vanishing orders, rank profiles, spectral polynomial and a sampler for
// integral Hitchin points.

#include "hq/factor.hpp"
#include "hq/higgs_bridge.hpp"

#include <random>

namespace hq {

/// alpha_j = p_j(z) (dz)^j / prod_i (z - x_i)^j, j = 1..r.
struct HitchinPoint {
  int rank = 0;
  MarkedLine line;
  std::vector<QPoly> coefficients;  // p_1..p_r

  int degree_bound(int j) const { return j * std::max(0, static_cast<int>(line.size()) - 2); }
};

/// M(z) = prod_k (z - x_k) phi(z) = sum_i A_i prod_{k != i} (z - x_k), evaluated at z.
template <class T>
Matrix<T> cleared_phi(const std::vector<Matrix<T>>& residues, const std::vector<Rational>& points, const T& z) {
  const std::size_t r = residues.front().rows();
  Matrix<T> m(r, r);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    T w(1);
    for (std::size_t k = 0; k < points.size(); ++k)
      if (k != i) w *= z - ScalarTraits<T>::from_rational(points[k]);
    m += residues[i] * w;
  }
  return m;
}

/// Coefficients c_0..c_r of det(lambda I - A) = sum_k c_k lambda^k (Faddeev-LeVerrier).
template <class T>
std::vector<T> charpoly_coefficients(const Matrix<T>& a) {
  const std::size_t r = a.rows();
  std::vector<T> c(r + 1, T(0));
  c[r] = T(1);
  Matrix<T> m(r, r);
  for (std::size_t k = 1; k <= r; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < r; ++i) m(i, i) += c[r - k + 1];
    const Matrix<T> am = a * m;
    c[r - k] = -am.trace() / T(static_cast<long>(k));
  }
  return c;
}

namespace detail {

/// Small-height rationals avoiding `avoid`: 0, 1, -1, 2, -2, ..., then halves.
inline std::vector<Rational> sample_nodes(std::size_t count, const std::vector<Rational>& avoid, unsigned seed = 0) {
  std::set<Rational> bad(avoid.begin(), avoid.end());
  std::vector<Rational> out;
  for (long den = 1; out.size() < count; ++den) {
    for (long k = 0; out.size() < count && k <= 64L * den; ++k) {
      for (int sign : {1, -1}) {
        if (k == 0 && sign < 0) continue;
        Rational q(sign * (k + static_cast<long>(seed)), den);
        q.canonicalize();
        if (q.get_den() != den) continue;  // already produced with a smaller denominator
        if (bad.count(q)) continue;
        if (std::find(out.begin(), out.end(), q) != out.end()) continue;
        out.push_back(q);
        if (out.size() == count) break;
      }
    }
    if (den > 1000) throw std::runtime_error("sample pool exhausted");
  }
  return out;
}

}  // namespace detail

inline int cleared_degree(const std::vector<QMatrix>& residues) {
  const int n = static_cast<int>(residues.size());
  QMatrix s(residues.front().rows(), residues.front().cols());
  for (const auto& a : residues) s += a;
  return std::max(0, is_zero(s) ? n - 2 : n - 1);
}

/// Exact characteristic polynomial data: evaluation at r*deg(M)+1 nodes and interpolation.
inline HitchinPoint char_poly(const std::vector<QMatrix>& residues, const MarkedLine& line, unsigned seed = 0) {
  if (residues.empty()) throw std::invalid_argument("char_poly: no residues");
  const int r = static_cast<int>(residues.front().rows());
  const int dm = cleared_degree(residues);
  const auto nodes = detail::sample_nodes(static_cast<std::size_t>(r * dm + 1), line.points, seed);
  std::vector<std::vector<Rational>> values(r + 1);
  for (const auto& z : nodes) {
    const auto c = charpoly_coefficients(cleared_phi(residues, line.points, z));
    for (int j = 1; j <= r; ++j) values[j].push_back(c[r - j]);
  }
  HitchinPoint hp;
  hp.rank = r;
  hp.line = line;
  for (int j = 1; j <= r; ++j) hp.coefficients.push_back(interpolate(nodes, values[j]));
  return hp;
}

inline HitchinPoint char_poly(const QHiggsTuple& h, unsigned seed = 0) {
  return char_poly(h.residues, h.type.line, seed);
}

/// Floating counterpart; approximate, never certifying.
inline std::vector<std::vector<Complex>> char_poly_float(const CHiggsTuple& h) {
  const int r = h.rank();
  const int n = static_cast<int>(h.num_points());
  const int dm = std::max(0, n - 2);
  const auto nodes = detail::sample_nodes(static_cast<std::size_t>(r * dm + 1), h.points());
  std::vector<Complex> xs;
  for (const auto& q : nodes) xs.emplace_back(q.get_d(), 0.0);
  std::vector<std::vector<Complex>> values(r + 1);
  for (const auto& z : xs) {
    const auto c = charpoly_coefficients(cleared_phi(h.residues, h.points(), z));
    for (int j = 1; j <= r; ++j) values[j].push_back(c[r - j]);
  }
  std::vector<std::vector<Complex>> out;
  for (int j = 1; j <= r; ++j) {
    auto p = interpolate(xs, values[j]);
    std::vector<Complex> c = p.coeffs();
    c.resize(static_cast<std::size_t>(j * dm + 1), Complex(0));
    out.push_back(c);
  }
  return out;
}

struct VanishingReport {
  std::vector<std::vector<int>> orders;  // orders[j-1][i], kInfiniteOrder for p_j = 0
  std::vector<std::vector<int>> eps;     // eps[j-1][i]
  std::vector<long> deg;                 // deg_j of the Hitchin base
  std::vector<bool> forced;              // deg_j < 0: p_j must vanish identically
  std::vector<bool> degree_ok;           // deg p_j <= j(n-2)
  bool member = false;                   // all orders >= eps and degree bounds hold
  bool exact_orders = false;             // order == eps at every (j, i) with j not forced
};

inline VanishingReport vanishing_orders(const HitchinPoint& hp, const ParabolicType& t) {
  if (hp.rank != t.rank || hp.coefficients.size() != static_cast<std::size_t>(t.rank))
    throw std::invalid_argument("Hitchin point rank differs from the type");
  if (hp.line.points != t.line.points) throw std::invalid_argument("Hitchin point and type use different marked points");
  VanishingReport rep;
  const auto me = mu_eps(t);
  const auto hd = hitchin_base_degrees(t);
  rep.deg = hd.deg;
  rep.member = true;
  rep.exact_orders = true;
  for (int j = 1; j <= t.rank; ++j) {
    const QPoly& p = hp.coefficients[j - 1];
    std::vector<int> ord, ep;
    rep.forced.push_back(hd.deg[j - 1] < 0);
    rep.degree_ok.push_back(p.degree() <= hp.degree_bound(j));
    if (!rep.degree_ok.back()) rep.member = false;
    for (std::size_t i = 0; i < t.num_points(); ++i) {
      const int o = vanishing_order(p, t.line.points[i]);
      const int e = me[i].eps[j - 1];
      ord.push_back(o);
      ep.push_back(e);
      if (o < e) rep.member = false;
      if (!rep.forced.back() && o != e) rep.exact_orders = false;
    }
    rep.orders.push_back(std::move(ord));
    rep.eps.push_back(std::move(ep));
  }
  return rep;
}

/// ranks[i][j-1] = rank(A_i^j) for j = 1..r.
template <class T>
std::vector<std::vector<int>> rank_profile(const std::vector<Matrix<T>>& residues, const NumericTol& tol = {}) {
  std::vector<std::vector<int>> out;
  for (const auto& a : residues) {
    std::vector<int> ranks;
    Matrix<T> p = Matrix<T>::identity(a.rows());
    // floating powers: singular values of A^j are measured against |A|^j
    double top = 0.0;
    if constexpr (!ScalarTraits<T>::exact) {
      const auto sv = singular_values(a);
      top = sv.size() ? sv(0) : 0.0;
    }
    for (std::size_t j = 1; j <= a.rows(); ++j) {
      p = p * a;
      if constexpr (ScalarTraits<T>::exact) {
        ranks.push_back(static_cast<int>(rank(p, tol)));
      } else {
        const double rel = tol.relative_for(a.rows(), a.cols());
        const NumericTol tj{0.0, std::max(tol.atol, rel * std::pow(top, static_cast<double>(j)))};
        ranks.push_back(static_cast<int>(rank(p, tj)));
      }
    }
    out.push_back(std::move(ranks));
  }
  return out;
}

/// True iff rank(A_i^j) = gamma_i^j for every class and power.
inline bool profile_matches(const std::vector<std::vector<int>>& ranks, const std::vector<NilpotentClass>& classes) {
  if (ranks.size() != classes.size()) return false;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    for (std::size_t j = 1; j <= ranks[i].size(); ++j)
      if (ranks[i][j - 1] != classes[i].gamma(static_cast<int>(j))) return false;
  return true;
}

/// lambda^r + sum_j p_j(z) lambda^{r-j}: the characteristic polynomial of M(z).
inline BiPoly spectral_poly(const HitchinPoint& hp) {
  BiPoly b;
  b.coeffs.assign(static_cast<std::size_t>(hp.rank + 1), QPoly());
  b.coeffs[hp.rank] = QPoly::constant(Rational(1));
  for (int j = 1; j <= hp.rank; ++j) b.coeffs[hp.rank - j] = hp.coefficients[j - 1];
  return b;
}

inline IntegralityResult is_integral(const HitchinPoint& hp, const IntegralityOptions& opt = {}) {
  return is_integral(spectral_poly(hp), opt);
}

struct SampledHitchinPoint {
  HitchinPoint point;
  int retries = 0;  // rejected draws before acceptance
  IntegralityResult integrality;
};

struct RetryBudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejection sampler for integral points with exact vanishing orders.
inline SampledHitchinPoint sample_hitchin_point(const ParabolicType& t, std::uint64_t seed, int max_retries = 50) {
  t.validate(true);
  if (!integral_base_condition(t))
    throw std::invalid_argument("integral-base condition fails: -2r + sum (r - eps_r(x)) < 0");
  const auto me = mu_eps(t);
  const auto hd = hitchin_base_degrees(t);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  auto draw = [&]() {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    HitchinPoint hp;
    hp.rank = t.rank;
    hp.line = t.line;
    for (int j = 1; j <= t.rank; ++j) {
      if (hd.deg[j - 1] < 0) {
        hp.coefficients.emplace_back();
        continue;
      }
      std::vector<Rational> q;
      for (long k = 0; k <= hd.deg[j - 1]; ++k) q.push_back(draw());
      while (sgn(q.back()) == 0) q.back() = draw();
      QPoly p(q);
      for (std::size_t i = 0; i < t.num_points(); ++i)
        p *= QPoly::linear_root(t.line.points[i]).pow(static_cast<unsigned>(me[i].eps[j - 1]));
      hp.coefficients.push_back(p);
    }
    const auto vo = vanishing_orders(hp, t);
    if (!vo.member || !vo.exact_orders) continue;
    auto integ = is_integral(hp);
    if (integ.verdict != Integrality::integral) continue;
    return SampledHitchinPoint{hp, attempt, integ};
  }
  throw RetryBudgetExhausted("no integral point with exact vanishing orders within " + std::to_string(max_retries) +
                             " retries");
}

}  // namespace hq
