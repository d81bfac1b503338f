#pragma once

// Parabolic types on the projective line and nilpotent classes, with the
// combinatorial quantities derived from them. Everything here is exact.

#include "hq/rational.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hq {

/// Distinct finite marked points x_1..x_n on the affine chart.
struct MarkedLine {
  std::vector<Rational> points;

  std::size_t size() const { return points.size(); }
  bool degenerate() const { return points.size() < 4; }

  /// Throws unless points are pairwise distinct and (unless allowed) n >= 4.
  void validate(bool allow_degenerate = false) const {
    if (!allow_degenerate && points.size() < 4)
      throw std::invalid_argument("marked line needs at least 4 points, got " + std::to_string(points.size()));
    std::set<Rational> seen;
    for (const auto& x : points)
      if (!seen.insert(x).second) throw std::invalid_argument("marked points must be distinct: " + to_string(x));
  }

  std::size_t index_of(const Rational& x) const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == x) return i;
    throw std::invalid_argument("unknown marked point " + to_string(x));
  }

  /// Default points 0, 1, ..., n-1.
  static MarkedLine standard(std::size_t n) {
    MarkedLine l;
    for (std::size_t i = 0; i < n; ++i) l.points.emplace_back(static_cast<long>(i));
    return l;
  }
};

/// Flag multiplicities and integer weights at every marked point.
struct ParabolicType {
  MarkedLine line;
  int rank = 0;
  long K = 1;
  std::vector<std::vector<int>> multiplicities;  // n_1(x)..n_sigma(x)
  std::vector<std::vector<long>> weights;        // a_1(x)..a_sigma(x)

  std::size_t num_points() const { return line.size(); }
  int sigma(std::size_t x) const { return static_cast<int>(multiplicities.at(x).size()); }

  void validate(bool allow_degenerate = false) const {
    if (rank <= 0) throw std::invalid_argument("rank must be positive");
    if (K <= 0) throw std::invalid_argument("K must be positive");
    line.validate(allow_degenerate);
    if (multiplicities.size() != line.size() || weights.size() != line.size())
      throw std::invalid_argument("multiplicities/weights must be given for every marked point");
    for (std::size_t x = 0; x < line.size(); ++x) {
      const auto& n = multiplicities[x];
      const auto& a = weights[x];
      const std::string at = " at point " + std::to_string(x + 1);
      if (n.empty()) throw std::invalid_argument("empty multiplicity list" + at);
      if (n.size() != a.size()) throw std::invalid_argument("multiplicities and weights differ in length" + at);
      long total = 0;
      for (int ni : n) {
        if (ni <= 0) throw std::invalid_argument("multiplicities must be positive" + at);
        total += ni;
      }
      if (total != rank) throw std::invalid_argument("multiplicities must sum to the rank" + at);
      if (a.front() < 0) throw std::invalid_argument("weights must be nonnegative" + at);
      for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] <= a[i - 1]) throw std::invalid_argument("weights must be strictly increasing" + at);
      if (a.back() >= K) throw std::invalid_argument("weights must be smaller than K" + at);
    }
  }

  /// gamma_i(x) = sum_{j>i} n_j(x) for i = 0..sigma (gamma_0 = r, gamma_sigma = 0).
  std::vector<int> gamma_chain(std::size_t x) const {
    const auto& n = multiplicities.at(x);
    std::vector<int> g(n.size() + 1, 0);
    g[0] = rank;
    for (std::size_t i = 1; i <= n.size(); ++i) g[i] = g[i - 1] - n[i - 1];
    return g;
  }

  /// d_i(x) = a_{i+1}(x) - a_i(x), i = 1..sigma-1.
  std::vector<long> weight_gaps(std::size_t x) const {
    const auto& a = weights.at(x);
    std::vector<long> d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] - a[i - 1]);
    return d;
  }
};

/// r * sum_x a_top(x) < K, i.e. (1/K) sum_x a_top(x) < 1/r.
inline bool check_small_weights(const ParabolicType& t) {
  Integer top = 0;
  for (const auto& a : t.weights) top += a.back();
  return Integer(t.rank) * top < Integer(t.K);
}

/// (gamma_1(x), ..., gamma_{sigma-1}(x)).
inline std::vector<int> flag_dimension_vector(const ParabolicType& t, std::size_t x) {
  if (x >= t.num_points()) throw std::invalid_argument("unknown marked point index " + std::to_string(x));
  std::vector<int> g = t.gamma_chain(x);
  return std::vector<int>(g.begin() + 1, g.end() - 1);
}

inline std::vector<int> flag_dimension_vector(const ParabolicType& t, const Rational& x) {
  return flag_dimension_vector(t, t.line.index_of(x));
}

struct MuEps {
  std::vector<int> mu;   // mu_1..mu_r
  std::vector<int> eps;  // eps_1..eps_r
};

/// mu_j = #{l : n_l >= j}; eps_j = l with sum_{t<l} mu_t < j <= sum_{t<=l} mu_t.
inline MuEps mu_eps(const std::vector<int>& n, int r) {
  MuEps out;
  out.mu.assign(static_cast<std::size_t>(r), 0);
  for (int j = 1; j <= r; ++j)
    out.mu[j - 1] = static_cast<int>(std::count_if(n.begin(), n.end(), [j](int v) { return v >= j; }));
  out.eps.assign(static_cast<std::size_t>(r), 0);
  int cum = 0;
  int l = 0;
  for (int j = 1; j <= r; ++j) {
    while (cum < j) {
      if (l >= r) throw std::logic_error("mu does not sum to the rank");
      cum += out.mu[l++];
    }
    out.eps[j - 1] = l;
  }
  const int maxn = n.empty() ? 0 : *std::max_element(n.begin(), n.end());
  if (r > 0 && out.eps.back() != maxn) throw std::logic_error("eps_r differs from max multiplicity");
  return out;
}

inline std::vector<MuEps> mu_eps(const ParabolicType& t) {
  std::vector<MuEps> out;
  for (std::size_t x = 0; x < t.num_points(); ++x) out.push_back(mu_eps(t.multiplicities[x], t.rank));
  return out;
}

struct HitchinDegrees {
  std::vector<long> deg;  // deg_1..deg_r
  long dimension = 0;     // dim H_P
};

/// deg_j = -2j + sum_x (j - eps_j(x)); dim = sum_j max(0, deg_j + 1).
inline HitchinDegrees hitchin_base_degrees(const ParabolicType& t) {
  const auto me = mu_eps(t);
  HitchinDegrees h;
  for (int j = 1; j <= t.rank; ++j) {
    long d = -2L * j;
    for (const auto& m : me) d += j - m.eps[j - 1];
    h.deg.push_back(d);
    h.dimension += std::max(0L, d + 1);
  }
  return h;
}

/// -2r + sum_x (r - eps_r(x)) >= 0; equivalently deg_r >= 0.
inline bool integral_base_condition(const ParabolicType& t) { return hitchin_base_degrees(t).deg.back() >= 0; }

/// Per arm: r - gamma_1 >= gamma_1 - gamma_2 >= ... >= gamma_{s-1} - gamma_s >= gamma_s > 0,
/// where gamma_1..gamma_s is the arm's dimension chain.
inline bool simpleness_condition_chain(int r, const std::vector<int>& chain) {
  std::vector<int> diffs;
  int prev = r;
  for (int g : chain) {
    diffs.push_back(prev - g);
    prev = g;
  }
  if (prev <= 0) return false;
  diffs.push_back(prev);
  for (std::size_t i = 1; i < diffs.size(); ++i)
    if (diffs[i] > diffs[i - 1]) return false;
  return true;
}

inline bool simpleness_condition(const ParabolicType& t) {
  for (std::size_t x = 0; x < t.num_points(); ++x)
    if (!simpleness_condition_chain(t.rank, flag_dimension_vector(t, x))) return false;
  return true;
}

struct WeightsGenericOptions {
  int max_rank = 10;   // enumeration bound
  long degree = 0;     // degree of the full object
};

/// No hypothetical sub-object (sub-rank s, per-point flag-step counts bounded
/// by n_i(x), degree d in [-r, 0]) has parabolic slope equal to the full one.
inline bool weights_generic(const ParabolicType& t, const WeightsGenericOptions& opt = {}) {
  const int r = t.rank;
  if (r > opt.max_rank)
    throw std::invalid_argument("weights_generic: rank " + std::to_string(r) + " exceeds enumeration bound " +
                                std::to_string(opt.max_rank));
  if (r <= 1) return true;
  Integer full_w = 0;
  for (std::size_t x = 0; x < t.num_points(); ++x)
    for (std::size_t i = 0; i < t.weights[x].size(); ++i) full_w += Integer(t.weights[x][i]) * t.multiplicities[x][i];

  for (int s = 1; s < r; ++s) {
    // achievable total weight of an s-dimensional sub-object, point by point
    std::set<long> sums{0};
    for (std::size_t x = 0; x < t.num_points(); ++x) {
      std::set<long> local;
      const auto& n = t.multiplicities[x];
      const auto& a = t.weights[x];
      std::vector<int> pick(n.size(), 0);
      // enumerate n^W with 0 <= n^W_i <= n_i and sum = s
      auto rec = [&](auto&& self, std::size_t i, int left, long acc) -> void {
        if (i == n.size()) {
          if (left == 0) local.insert(acc);
          return;
        }
        for (int c = 0; c <= std::min(n[i], left); ++c) self(self, i + 1, left - c, acc + c * a[i]);
      };
      rec(rec, 0, s, 0);
      std::set<long> next;
      for (long u : sums)
        for (long v : local) next.insert(u + v);
      sums = std::move(next);
    }
    // (d + W/K)/s == (D + Wfull/K)/r  <=>  r(dK + W) == s(DK + Wfull)
    const Integer rhs = Integer(s) * (Integer(opt.degree) * t.K + full_w);
    for (long d = -r; d <= 0; ++d)
      for (long w : sums)
        if (Integer(r) * (Integer(d) * t.K + w) == rhs) return false;
  }
  return true;
}

struct DsFeasibility {
  bool feasible = false;  // 2r <= sum gamma_i^1
  long lhs = 0;           // 2r
  long rhs = 0;           // sum gamma_i^1
  bool n_at_least_4 = false;
  bool r_at_least_4 = false;
};

/// Nilpotent conjugacy class by its rank sequence gamma^j = rank(N^j), j >= 1.
struct NilpotentClass {
  int rank = 0;
  std::vector<int> rank_sequence;  // strictly decreasing, positive

  void validate() const {
    if (rank <= 0) throw std::invalid_argument("class rank must be positive");
    int prev = rank;
    int prev_diff = -1;
    for (std::size_t j = 0; j < rank_sequence.size(); ++j) {
      const int g = rank_sequence[j];
      if (g <= 0 || g >= prev)
        throw std::invalid_argument("rank sequence must be positive and strictly decreasing below the rank");
      const int diff = prev - g;
      if (prev_diff >= 0 && diff > prev_diff)
        throw std::invalid_argument("rank sequence differences must be nonincreasing");
      prev_diff = diff;
      prev = g;
    }
    if (prev_diff >= 0 && prev > prev_diff)
      throw std::invalid_argument("rank sequence differences must be nonincreasing");
  }

  int gamma(int j) const {
    if (j <= 0) return rank;
    return j <= static_cast<int>(rank_sequence.size()) ? rank_sequence[j - 1] : 0;
  }

  /// Nilpotency index: smallest k with N^k = 0.
  int nilpotency_index() const { return static_cast<int>(rank_sequence.size()) + 1; }

  /// Number of Jordan blocks of size >= j, j = 1..index (the conjugate partition).
  std::vector<int> conjugate_partition() const {
    std::vector<int> c;
    for (int j = 1; j <= nilpotency_index(); ++j) c.push_back(gamma(j - 1) - gamma(j));
    return c;
  }

  /// Jordan block sizes in nonincreasing order.
  std::vector<int> partition() const {
    const auto c = conjugate_partition();
    std::vector<int> p;
    if (c.empty()) return p;
    for (int b = 1; b <= c.front(); ++b) {
      int size = 0;
      for (int v : c)
        if (v >= b) ++size;
      p.push_back(size);
    }
    return p;
  }

  static NilpotentClass from_partition(const std::vector<int>& blocks) {
    NilpotentClass nc;
    for (int b : blocks) {
      if (b <= 0) throw std::invalid_argument("Jordan blocks must be positive");
      nc.rank += b;
    }
    for (int j = 1;; ++j) {
      int g = 0;
      for (int b : blocks) g += std::max(0, b - j);
      if (g == 0) break;
      nc.rank_sequence.push_back(g);
    }
    nc.validate();
    return nc;
  }

  static NilpotentClass zero(int r) { return NilpotentClass{r, {}}; }

  friend bool operator==(const NilpotentClass&, const NilpotentClass&) = default;
};

inline DsFeasibility ds_feasible(const std::vector<NilpotentClass>& classes, int r) {
  DsFeasibility f;
  for (const auto& c : classes) {
    if (c.rank != r) throw std::invalid_argument("nilpotent classes must share the rank " + std::to_string(r));
    f.rhs += c.gamma(1);
  }
  f.lhs = 2L * r;
  f.feasible = f.lhs <= f.rhs;
  f.n_at_least_4 = classes.size() >= 4;
  f.r_at_least_4 = r >= 4;
  return f;
}

/// Type whose flags at x_i are the image filtration of class i:
/// multiplicities are the conjugate partition, weights 0, 1, 2, ... and K
/// large enough for the small-weights condition.
inline ParabolicType type_from_classes(const std::vector<NilpotentClass>& classes, const MarkedLine& line) {
  if (classes.size() != line.size()) throw std::invalid_argument("one marked point per class required");
  ParabolicType t;
  t.line = line;
  t.rank = classes.empty() ? 0 : classes.front().rank;
  long top = 0;
  for (const auto& c : classes) {
    if (c.rank != t.rank) throw std::invalid_argument("nilpotent classes must share the rank");
    const auto n = c.conjugate_partition();
    t.multiplicities.push_back(n);
    std::vector<long> a(n.size());
    std::iota(a.begin(), a.end(), 0L);
    top += a.back();
    t.weights.push_back(a);
  }
  t.K = t.rank * top + 1;
  return t;
}

}  // namespace hq
