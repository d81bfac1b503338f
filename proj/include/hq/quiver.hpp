#pragma once

// Star-shaped quiver, representations of its double, moment map, stability
// characters, the arm rank criterion and trace invariants.
//
// Orientation: f_i^j maps level i-1 of arm j outward to level i, g_i^j maps
// level i back to level i-1. Level 0 of every arm is the central vertex.

#include "hq/linalg.hpp"
#include "hq/type_combinatorics.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hq {

struct StarQuiver {
  int rank = 0;
  std::vector<std::vector<int>> arms;  // dimension chain (gamma_1, ..., gamma_sigma) per arm

  std::size_t num_arms() const { return arms.size(); }
  int length(std::size_t j) const { return static_cast<int>(arms.at(j).size()); }

  /// Dimension at (arm j, level i); level 0 is the center.
  int dim(std::size_t j, int i) const { return i == 0 ? rank : arms.at(j).at(static_cast<std::size_t>(i - 1)); }

  void validate() const {
    if (rank < 0) throw std::invalid_argument("quiver rank must be nonnegative");
    for (std::size_t j = 0; j < arms.size(); ++j) {
      int prev = rank;
      for (std::size_t i = 0; i < arms[j].size(); ++i) {
        const int g = arms[j][i];
        if (g <= 0) throw std::invalid_argument("arm chains must be positive (arm " + std::to_string(j + 1) + ")");
        if (i == 0 ? g > prev : g >= prev)
          throw std::invalid_argument("arm chains must decrease (arm " + std::to_string(j + 1) + ")");
        prev = g;
      }
    }
  }

  friend bool operator==(const StarQuiver&, const StarQuiver&) = default;
};

inline StarQuiver build_star_quiver(const ParabolicType& t) {
  StarQuiver q;
  q.rank = t.rank;
  for (std::size_t x = 0; x < t.num_points(); ++x) q.arms.push_back(flag_dimension_vector(t, x));
  return q;
}

/// Character (det g_0)^{-N} prod (det g_i^j)^{d_i^j}, stored after scaling.
struct StabilityCharacter {
  long central = 0;                           // -N
  std::vector<std::vector<long>> exponents;   // scaled d_i^j per arm
  long multiplier = 1;                        // least positive scaling applied

  long exponent(std::size_t j, int level) const {
    return level == 0 ? central : exponents.at(j).at(static_cast<std::size_t>(level - 1));
  }
};

inline StabilityCharacter build_character(const ParabolicType& t) {
  const StarQuiver q = build_star_quiver(t);
  StabilityCharacter c;
  long s = 0;
  std::vector<std::vector<long>> d(t.num_points());
  for (std::size_t x = 0; x < t.num_points(); ++x) {
    const auto gaps = t.weight_gaps(x);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      d[x].push_back(gaps[i]);
      s += static_cast<long>(q.arms[x][i]) * gaps[i];
    }
  }
  const long r = t.rank;
  const long g = std::gcd(s, r);
  c.multiplier = s == 0 ? 1 : r / g;
  const long n = s * c.multiplier / r;
  c.central = -n;
  for (auto& arm : d)
    for (auto& v : arm) v *= c.multiplier;
  c.exponents = std::move(d);
  return c;
}

/// Representation of the doubled star quiver.
template <class T>
struct StarRep {
  StarQuiver quiver;
  std::vector<std::vector<Matrix<T>>> f;  // f[j][i-1]: gamma_i x gamma_{i-1}
  std::vector<std::vector<Matrix<T>>> g;  // g[j][i-1]: gamma_{i-1} x gamma_i
  std::vector<Rational> points;           // marked point of each arm

  static StarRep zero(const StarQuiver& q, std::vector<Rational> pts = {}) {
    StarRep rep;
    rep.quiver = q;
    rep.points = pts.empty() ? MarkedLine::standard(q.num_arms()).points : std::move(pts);
    rep.f.resize(q.num_arms());
    rep.g.resize(q.num_arms());
    for (std::size_t j = 0; j < q.num_arms(); ++j)
      for (int i = 1; i <= q.length(j); ++i) {
        rep.f[j].emplace_back(q.dim(j, i), q.dim(j, i - 1));
        rep.g[j].emplace_back(q.dim(j, i - 1), q.dim(j, i));
      }
    return rep;
  }

  const Matrix<T>& f_at(std::size_t j, int i) const { return f.at(j).at(static_cast<std::size_t>(i - 1)); }
  const Matrix<T>& g_at(std::size_t j, int i) const { return g.at(j).at(static_cast<std::size_t>(i - 1)); }
  Matrix<T>& f_at(std::size_t j, int i) { return f.at(j).at(static_cast<std::size_t>(i - 1)); }
  Matrix<T>& g_at(std::size_t j, int i) { return g.at(j).at(static_cast<std::size_t>(i - 1)); }

  void validate() const {
    quiver.validate();
    if (f.size() != quiver.num_arms() || g.size() != quiver.num_arms())
      throw std::invalid_argument("representation arm count differs from the quiver");
    if (points.size() != quiver.num_arms()) throw std::invalid_argument("one marked point per arm required");
    for (std::size_t j = 0; j < quiver.num_arms(); ++j) {
      if (f[j].size() != static_cast<std::size_t>(quiver.length(j)) ||
          g[j].size() != static_cast<std::size_t>(quiver.length(j)))
        throw std::invalid_argument("arm " + std::to_string(j + 1) + " has the wrong number of levels");
      for (int i = 1; i <= quiver.length(j); ++i) {
        const auto out = static_cast<std::size_t>(quiver.dim(j, i));
        const auto in = static_cast<std::size_t>(quiver.dim(j, i - 1));
        if (f_at(j, i).rows() != out || f_at(j, i).cols() != in || g_at(j, i).rows() != in ||
            g_at(j, i).cols() != out)
          throw std::invalid_argument("shape mismatch at arm " + std::to_string(j + 1) + " level " +
                                      std::to_string(i));
      }
    }
  }
};

using QStarRep = StarRep<Rational>;
using CStarRep = StarRep<Complex>;

inline CStarRep to_complex(const QStarRep& rep) {
  CStarRep out;
  out.quiver = rep.quiver;
  out.points = rep.points;
  out.f.resize(rep.f.size());
  out.g.resize(rep.g.size());
  for (std::size_t j = 0; j < rep.f.size(); ++j) {
    for (const auto& m : rep.f[j]) out.f[j].push_back(to_complex(m));
    for (const auto& m : rep.g[j]) out.g[j].push_back(to_complex(m));
  }
  return out;
}

template <class T>
struct MomentValue {
  Matrix<T> center;
  std::vector<std::vector<Matrix<T>>> arms;  // arms[j][i-1]

  double max_abs() const {
    double m = 0.0;
    auto upd = [&m](const Matrix<T>& a) {
      for (const auto& v : a.data()) m = std::max(m, ScalarTraits<T>::magnitude(v));
    };
    upd(center);
    for (const auto& arm : arms)
      for (const auto& a : arm) upd(a);
    return m;
  }
};

/// Center: sum_j g_1 f_1. Arm (j,i): f_i g_i - g_{i+1} f_{i+1}; last level f_s g_s.
template <class T>
MomentValue<T> moment_map(const StarRep<T>& rep) {
  rep.validate();
  const auto& q = rep.quiver;
  MomentValue<T> mu;
  mu.center = Matrix<T>(q.rank, q.rank);
  mu.arms.resize(q.num_arms());
  for (std::size_t j = 0; j < q.num_arms(); ++j) {
    const int s = q.length(j);
    if (s == 0) continue;
    mu.center += rep.g_at(j, 1) * rep.f_at(j, 1);
    for (int i = 1; i <= s; ++i) {
      Matrix<T> m = rep.f_at(j, i) * rep.g_at(j, i);
      if (i < s) m -= rep.g_at(j, i + 1) * rep.f_at(j, i + 1);
      mu.arms[j].push_back(std::move(m));
    }
  }
  return mu;
}

/// Every g_i^j on the arm has full column rank gamma_i^j.
template <class T>
bool arm_semistable(const StarRep<T>& rep, std::size_t j, const NumericTol& tol = {}) {
  for (int i = 1; i <= rep.quiver.length(j); ++i)
    if (rank(rep.g_at(j, i), tol) != static_cast<std::size_t>(rep.quiver.dim(j, i))) return false;
  return true;
}

/// One-parameter subgroup acting at a single arm vertex:
/// lambda(t) = basis * diag(t^{exponents}) * basis^{-1}, identity elsewhere.
template <class T>
struct OneParamSubgroup {
  std::size_t arm = 0;
  int level = 0;
  Matrix<T> basis;
  std::vector<int> exponents;
  long pairing = 0;  // <chi, lambda>
};

/// Destabilizing subgroup built from a kernel vector of the deepest
/// rank-deficient g on the arm; none if the arm passes.
template <class T>
std::optional<OneParamSubgroup<T>> destabilizing_one_ps(const StarRep<T>& rep, std::size_t j,
                                                        const StabilityCharacter& chi, const NumericTol& tol = {}) {
  for (int i = rep.quiver.length(j); i >= 1; --i) {
    const Matrix<T>& gi = rep.g_at(j, i);
    const auto dim = static_cast<std::size_t>(rep.quiver.dim(j, i));
    if (rank(gi, tol) == dim) continue;
    const Matrix<T> ker = nullspace(gi, tol);
    Matrix<T> v = ker.col(0);
    // pivot: largest entry (first nonzero in exact mode)
    std::size_t k = 0;
    double best = -1.0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double mag = ScalarTraits<T>::magnitude(v(a, 0));
      if constexpr (ScalarTraits<T>::exact) {
        if (mag > 0.0 && best < 0.0) {
          best = mag;
          k = a;
        }
      } else if (mag > best) {
        best = mag;
        k = a;
      }
    }
    OneParamSubgroup<T> ps;
    ps.arm = j;
    ps.level = i;
    ps.basis = Matrix<T>::identity(dim);
    ps.basis.set_block(0, k, v);
    ps.exponents.assign(dim, 0);
    ps.exponents[k] = -1;
    ps.pairing = -chi.exponent(j, i);
    return ps;
  }
  return std::nullopt;
}

/// Block-diagonal group element: one invertible matrix per vertex.
template <class T>
struct GroupElement {
  Matrix<T> center;
  std::vector<std::vector<Matrix<T>>> arms;  // arms[j][i-1]

  static GroupElement identity(const StarQuiver& q) {
    GroupElement h;
    h.center = Matrix<T>::identity(q.rank);
    h.arms.resize(q.num_arms());
    for (std::size_t j = 0; j < q.num_arms(); ++j)
      for (int i = 1; i <= q.length(j); ++i) h.arms[j].push_back(Matrix<T>::identity(q.dim(j, i)));
    return h;
  }

  const Matrix<T>& at(std::size_t j, int i) const { return i == 0 ? center : arms.at(j).at(i - 1); }
};

/// f_i -> h_i f_i h_{i-1}^{-1}, g_i -> h_{i-1} g_i h_i^{-1}.
template <class T>
StarRep<T> group_act(const StarRep<T>& rep, const GroupElement<T>& h, const NumericTol& tol = {}) {
  rep.validate();
  const auto& q = rep.quiver;
  auto checked_inverse = [&tol](const Matrix<T>& m, const std::string& where) {
    if (!m.is_square() || rank(m, tol) != m.rows()) throw std::invalid_argument("singular group block at " + where);
    return inverse(m, tol);
  };
  if (h.center.rows() != static_cast<std::size_t>(q.rank) || h.arms.size() != q.num_arms())
    throw std::invalid_argument("group element shape differs from the quiver");
  const Matrix<T> h0inv = checked_inverse(h.center, "center");
  StarRep<T> out = rep;
  for (std::size_t j = 0; j < q.num_arms(); ++j) {
    if (h.arms[j].size() != static_cast<std::size_t>(q.length(j)))
      throw std::invalid_argument("group element arm length differs from the quiver");
    std::vector<Matrix<T>> inv;
    for (int i = 1; i <= q.length(j); ++i)
      inv.push_back(checked_inverse(h.at(j, i), "arm " + std::to_string(j + 1) + " level " + std::to_string(i)));
    for (int i = 1; i <= q.length(j); ++i) {
      const Matrix<T>& prev_inv = i == 1 ? h0inv : inv[i - 2];
      out.f_at(j, i) = h.at(j, i) * rep.f_at(j, i) * prev_inv;
      out.g_at(j, i) = h.at(j, i - 1) * rep.g_at(j, i) * inv[i - 1];
    }
  }
  return out;
}

/// Moment map conjugated blockwise by h (the expected transform under group_act).
template <class T>
MomentValue<T> conjugate_moment(const MomentValue<T>& mu, const GroupElement<T>& h) {
  MomentValue<T> out = mu;
  out.center = h.center * mu.center * inverse(h.center);
  for (std::size_t j = 0; j < mu.arms.size(); ++j)
    for (std::size_t i = 0; i < mu.arms[j].size(); ++i)
      out.arms[j][i] = h.arms[j][i] * mu.arms[j][i] * inverse(h.arms[j][i]);
  return out;
}

/// Acts by lambda(t)^{-1} at the subgroup's vertex on the inward maps only
/// (the representation space of the arm quiver). For a destabilizing
/// subgroup the result stays bounded as t -> 0.
template <class T>
StarRep<T> replay_one_ps(const StarRep<T>& rep, const OneParamSubgroup<T>& ps, const T& t) {
  const std::size_t dim = ps.basis.rows();
  Matrix<T> dinv(dim, dim);  // diag(t^{-m})
  Matrix<T> d(dim, dim);     // diag(t^{m})
  for (std::size_t a = 0; a < dim; ++a) {
    T p(1);
    for (int e = 0; e < std::abs(ps.exponents[a]); ++e) p *= t;
    const T ip = T(1) / p;
    d(a, a) = ps.exponents[a] >= 0 ? p : ip;
    dinv(a, a) = ps.exponents[a] >= 0 ? ip : p;
  }
  const Matrix<T> binv = inverse(ps.basis);
  const Matrix<T> lam = ps.basis * d * binv;
  const Matrix<T> lam_inv = ps.basis * dinv * binv;
  StarRep<T> out = rep;
  const std::size_t j = ps.arm;
  const int i = ps.level;
  out.g_at(j, i) = rep.g_at(j, i) * lam;  // g_i h_i^{-1} with h_i = lambda^{-1}
  if (i < rep.quiver.length(j)) out.g_at(j, i + 1) = lam_inv * rep.g_at(j, i + 1);
  return out;
}

/// One step of a walk in the doubled quiver.
struct WalkStep {
  std::size_t arm = 0;
  int level = 1;         // the arrow joins levels level-1 and level
  bool outward = true;   // f (outward) or g (inward)
};

struct QuiverVertex {
  std::size_t arm = 0;  // ignored when level == 0
  int level = 0;
  friend bool operator==(const QuiverVertex& a, const QuiverVertex& b) {
    return a.level == b.level && (a.level == 0 || a.arm == b.arm);
  }
};

/// Trace of the composition along a closed walk starting at `start`.
template <class T>
T trace_along_cycle(const StarRep<T>& rep, const QuiverVertex& start, const std::vector<WalkStep>& walk) {
  const auto& q = rep.quiver;
  QuiverVertex cur = start;
  Matrix<T> acc = Matrix<T>::identity(static_cast<std::size_t>(q.dim(start.arm, start.level)));
  for (const auto& s : walk) {
    if (s.arm >= q.num_arms() || s.level < 1 || s.level > q.length(s.arm))
      throw std::invalid_argument("walk step outside the quiver");
    const QuiverVertex tail{s.arm, s.outward ? s.level - 1 : s.level};
    const QuiverVertex head{s.arm, s.outward ? s.level : s.level - 1};
    if (!(tail == cur)) throw std::invalid_argument("walk is not connected");
    acc = (s.outward ? rep.f_at(s.arm, s.level) : rep.g_at(s.arm, s.level)) * acc;
    cur = head;
  }
  if (!(cur == start)) throw std::invalid_argument("walk is not closed");
  return acc.trace();
}

/// All closed walks of length 1..max_len from `start` (length 0 excluded).
inline std::vector<std::vector<WalkStep>> closed_walks(const StarQuiver& q, const QuiverVertex& start, int max_len) {
  std::vector<std::vector<WalkStep>> out;
  std::vector<WalkStep> path;
  auto rec = [&](auto&& self, QuiverVertex cur) -> void {
    if (!path.empty() && cur == start) out.push_back(path);
    if (static_cast<int>(path.size()) == max_len) return;
    std::vector<WalkStep> moves;
    if (cur.level == 0) {
      for (std::size_t j = 0; j < q.num_arms(); ++j)
        if (q.length(j) >= 1) moves.push_back({j, 1, true});
    } else {
      moves.push_back({cur.arm, cur.level, false});
      if (cur.level < q.length(cur.arm)) moves.push_back({cur.arm, cur.level + 1, true});
    }
    for (const auto& m : moves) {
      path.push_back(m);
      self(self, QuiverVertex{m.arm, m.outward ? m.level : m.level - 1});
      path.pop_back();
    }
  };
  rec(rec, start);
  return out;
}

}  // namespace hq
