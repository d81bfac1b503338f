#pragma once

// Residue tuples with flags (homologically trivial parabolic Higgs fields
// on the projective line) and their dictionary with moment-zero
// representations of the doubled star quiver. Also parabolic slopes,
// irreducibility (Burnside) and the stability verdict.

#include "hq/quiver.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hq {

template <class T>
struct HiggsTuple {
  ParabolicType type;
  std::vector<Matrix<T>> residues;               // A_1..A_n
  std::vector<std::vector<Matrix<T>>> flags;     // flags[x][j-1]: basis of F^j, j = 1..sigma_x-1

  int rank() const { return type.rank; }
  std::size_t num_points() const { return residues.size(); }
  const std::vector<Rational>& points() const { return type.line.points; }

  /// Basis of F^j at point x for j = 0..sigma_x (F^0 = whole space, F^sigma = 0).
  Matrix<T> flag(std::size_t x, int j) const {
    const int s = type.sigma(x);
    if (j <= 0) return Matrix<T>::identity(static_cast<std::size_t>(type.rank));
    if (j >= s) return Matrix<T>(static_cast<std::size_t>(type.rank), 0);
    return flags.at(x).at(static_cast<std::size_t>(j - 1));
  }
};

using QHiggsTuple = HiggsTuple<Rational>;
using CHiggsTuple = HiggsTuple<Complex>;

inline CHiggsTuple to_complex(const QHiggsTuple& h) {
  CHiggsTuple c;
  c.type = h.type;
  for (const auto& a : h.residues) c.residues.push_back(to_complex(a));
  c.flags.resize(h.flags.size());
  for (std::size_t x = 0; x < h.flags.size(); ++x)
    for (const auto& f : h.flags[x]) c.flags[x].push_back(to_complex(f));
  return c;
}

/// Tolerances for floating-mode checks; ignored in exact mode.
struct BridgeTol {
  double residual = 1e-8;     // |sum A_i|, moment components, containment residuals
  NumericTol rank{1e-9, 1e-12};
};

struct HiggsInvariantReport {
  double sum_residual = 0.0;    // max |(sum A_i)_{ab}|
  bool sum_zero = false;
  bool dims_ok = false;
  bool nested_ok = false;
  bool strong_preservation = false;
  bool degenerate_line = false;  // fewer than 4 marked points
  std::vector<std::string> problems;

  bool ok() const { return sum_zero && dims_ok && nested_ok && strong_preservation; }
};

template <class T>
HiggsInvariantReport check_invariants(const HiggsTuple<T>& h, const BridgeTol& tol = {}) {
  HiggsInvariantReport rep;
  const auto r = static_cast<std::size_t>(h.rank());
  h.type.validate(true);
  rep.degenerate_line = h.type.line.degenerate();
  if (h.residues.size() != h.type.num_points() || h.flags.size() != h.type.num_points())
    throw std::invalid_argument("residues/flags must be given for every marked point");
  Matrix<T> sum(r, r);
  for (const auto& a : h.residues) {
    if (a.rows() != r || a.cols() != r) throw std::invalid_argument("residue matrices must be r x r");
    sum += a;
  }
  if constexpr (ScalarTraits<T>::exact) {
    rep.sum_zero = is_zero(sum);
    rep.sum_residual = max_abs(to_complex(sum));
  } else {
    rep.sum_residual = max_abs(sum);
    rep.sum_zero = rep.sum_residual <= tol.residual;
  }
  if (!rep.sum_zero) rep.problems.push_back("residues do not sum to zero");

  rep.dims_ok = rep.nested_ok = rep.strong_preservation = true;
  for (std::size_t x = 0; x < h.num_points(); ++x) {
    const auto gam = h.type.gamma_chain(x);
    const int s = h.type.sigma(x);
    if (h.flags[x].size() != static_cast<std::size_t>(s - 1)) {
      rep.dims_ok = false;
      rep.problems.push_back("point " + std::to_string(x + 1) + ": wrong number of flag steps");
      continue;
    }
    for (int j = 1; j < s; ++j) {
      const Matrix<T> f = h.flag(x, j);
      if (f.rows() != r || f.cols() != static_cast<std::size_t>(gam[j]) ||
          rank(f, tol.rank) != static_cast<std::size_t>(gam[j])) {
        rep.dims_ok = false;
        rep.problems.push_back("point " + std::to_string(x + 1) + ": flag step " + std::to_string(j) +
                               " does not have dimension " + std::to_string(gam[j]));
      }
    }
    if (!rep.dims_ok) continue;
    for (int j = 1; j < s; ++j)
      if (!contained_in(h.flag(x, j), h.flag(x, j - 1), tol.residual)) {
        rep.nested_ok = false;
        rep.problems.push_back("point " + std::to_string(x + 1) + ": flag is not nested at step " + std::to_string(j));
      }
    for (int j = 0; j < s; ++j)
      if (!contained_in(Matrix<T>(h.residues[x] * h.flag(x, j)), h.flag(x, j + 1), tol.residual)) {
        rep.strong_preservation = false;
        rep.problems.push_back("point " + std::to_string(x + 1) + ": residue does not map F^" + std::to_string(j) +
                               " into F^" + std::to_string(j + 1));
      }
  }
  return rep;
}

// ------------------------------------------------------------ dictionary

/// A_i = g_1 f_1 and F^{i,j} = Im(g_1 ... g_j).
template <class T>
HiggsTuple<T> quiver_to_higgs(const StarRep<T>& rep, const ParabolicType& type, const BridgeTol& tol = {}) {
  rep.validate();
  type.validate(true);
  if (!(build_star_quiver(type) == rep.quiver))
    throw std::invalid_argument("representation quiver does not match the parabolic type");
  const double mom = moment_map(rep).max_abs();
  if constexpr (ScalarTraits<T>::exact) {
    if (mom != 0.0) throw std::invalid_argument("moment map does not vanish");
  } else if (mom > tol.residual) {
    throw std::invalid_argument("moment map does not vanish (max component " + to_string(mom) + ")");
  }
  HiggsTuple<T> h;
  h.type = type;
  const auto r = static_cast<std::size_t>(type.rank);
  for (std::size_t j = 0; j < rep.quiver.num_arms(); ++j) {
    if (!arm_semistable(rep, j, tol.rank))
      throw std::invalid_argument("arm " + std::to_string(j + 1) + " is rank deficient");
    const int s = rep.quiver.length(j);
    h.residues.push_back(s == 0 ? Matrix<T>(r, r) : Matrix<T>(rep.g_at(j, 1) * rep.f_at(j, 1)));
    std::vector<Matrix<T>> fl;
    Matrix<T> acc = Matrix<T>::identity(r);
    for (int i = 1; i <= s; ++i) {
      acc = acc * rep.g_at(j, i);
      fl.push_back(acc);
    }
    h.flags.push_back(std::move(fl));
  }
  return h;
}

/// g_j: coordinates of F^j in F^{j-1}; f_j: coordinates of A F^{j-1} in F^j.
template <class T>
StarRep<T> higgs_to_quiver(const HiggsTuple<T>& h, const BridgeTol& tol = {}) {
  const auto inv = check_invariants(h, tol);
  if (!inv.dims_ok || !inv.nested_ok) throw std::invalid_argument("flags are malformed");
  StarRep<T> rep = StarRep<T>::zero(build_star_quiver(h.type), h.points());
  for (std::size_t x = 0; x < h.num_points(); ++x) {
    const int s = rep.quiver.length(x);
    for (int j = 1; j <= s; ++j) {
      const Matrix<T> prev = h.flag(x, j - 1);
      const Matrix<T> cur = h.flag(x, j);
      auto gj = solve(prev, cur, tol.rank);
      auto fj = solve(cur, Matrix<T>(h.residues[x] * prev), tol.rank);
      if (!gj) throw std::invalid_argument("flag is not nested at point " + std::to_string(x + 1));
      if (!fj)
        throw std::invalid_argument("strong preservation fails at point " + std::to_string(x + 1) + ", step " +
                                    std::to_string(j));
      rep.g_at(x, j) = *gj;
      rep.f_at(x, j) = *fj;
    }
    if (s == 0) {
      bool zero;
      if constexpr (ScalarTraits<T>::exact)
        zero = is_zero(h.residues[x]);
      else
        zero = max_abs(h.residues[x]) <= tol.residual;
      if (!zero) throw std::invalid_argument("residue must vanish at a point without flag steps");
    }
  }
  return rep;
}

/// phi(z) = sum_i A_i / (z - x_i).
template <class T>
Matrix<T> assemble_phi(const std::vector<Matrix<T>>& residues, const std::vector<Rational>& points, const T& z) {
  if (residues.empty()) throw std::invalid_argument("no residues");
  const std::size_t r = residues.front().rows();
  Matrix<T> phi(r, r);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const T diff = z - ScalarTraits<T>::from_rational(points.at(i));
    if (ScalarTraits<T>::magnitude(diff) == 0.0) throw std::domain_error("evaluation at a marked point");
    phi += residues[i] * (T(1) / diff);
  }
  return phi;
}

template <class T>
Matrix<T> assemble_phi(const HiggsTuple<T>& h, const T& z) {
  return assemble_phi(h.residues, h.points(), z);
}

// ------------------------------------------------------------ slopes

/// (deg + (1/K) sum_x sum_i a_i(x) n_i^F(x)) / rank for explicit data.
inline Rational parabolic_slope(const ParabolicType& t, long degree, int rank,
                                const std::vector<std::vector<int>>& step_counts) {
  if (rank <= 0) throw std::invalid_argument("slope of a zero-rank object");
  if (step_counts.size() != t.num_points()) throw std::invalid_argument("step counts needed at every point");
  Integer w = 0;
  for (std::size_t x = 0; x < t.num_points(); ++x) {
    if (step_counts[x].size() != t.weights[x].size()) throw std::invalid_argument("step counts length mismatch");
    int total = 0;
    for (std::size_t i = 0; i < step_counts[x].size(); ++i) {
      w += Integer(t.weights[x][i]) * step_counts[x][i];
      total += step_counts[x][i];
    }
    if (total != rank) throw std::invalid_argument("step counts must sum to the rank at every point");
  }
  Rational pardeg = Rational(degree) + Rational(w, Integer(t.K));
  pardeg.canonicalize();
  Rational slope = pardeg / rank;
  slope.canonicalize();
  return slope;
}

/// n_i^W(x) = dim(F^{i-1} cap W) - dim(F^i cap W).
template <class T>
std::vector<std::vector<int>> induced_step_counts(const HiggsTuple<T>& h, const Matrix<T>& w,
                                                  const NumericTol& tol = {1e-9, 1e-12}) {
  std::vector<std::vector<int>> counts;
  for (std::size_t x = 0; x < h.num_points(); ++x) {
    const int s = h.type.sigma(x);
    std::vector<int> c;
    for (int i = 1; i <= s; ++i) {
      const auto hi = static_cast<int>(intersection_dim(h.flag(x, i - 1), w, tol));
      const auto lo = static_cast<int>(intersection_dim(h.flag(x, i), w, tol));
      c.push_back(hi - lo);
    }
    counts.push_back(std::move(c));
  }
  return counts;
}

/// Parabolic slope of the trivial subbundle W (x) O; W = none means the whole object.
template <class T>
Rational parabolic_slope(const HiggsTuple<T>& h, const std::optional<Matrix<T>>& w = std::nullopt,
                         const NumericTol& tol = {1e-9, 1e-12}) {
  if (!w) return parabolic_slope(h.type, 0, h.rank(), h.type.multiplicities);
  const std::size_t dim = w->cols();
  if (dim == 0 || w->rows() != static_cast<std::size_t>(h.rank()) || rank(*w, tol) != dim)
    throw std::invalid_argument("W is not given by a full-rank basis");
  return parabolic_slope(h.type, 0, static_cast<int>(dim), induced_step_counts(h, *w, tol));
}

// ------------------------------------------------------------ irreducibility

template <class T>
struct IrreducibilityResult {
  bool irreducible = false;
  std::size_t algebra_dim = 0;
  std::vector<std::vector<std::size_t>> words;  // 1-based generator indices, left to right
  std::optional<Matrix<T>> witness;             // proper invariant subspace when found
};

namespace detail {

/// Incrementally maintained basis of a span of flattened matrices.
template <class T>
class SpanBasis {
 public:
  SpanBasis(std::size_t len, double rtol) : len_(len), rtol_(rtol) {}

  /// Adds v if it is independent of the current span; returns whether it was added.
  /// Floating mode compares the new component against `ref` (default |v|).
  bool add(const std::vector<T>& v, double ref = -1.0) {
    std::vector<T> u = v;
    if constexpr (ScalarTraits<T>::exact) {
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        const T c = u[pivots_[k]];
        if (sgn(c) == 0) continue;
        for (std::size_t a = 0; a < len_; ++a) u[a] -= c * rows_[k][a];
      }
      std::size_t p = 0;
      while (p < len_ && sgn(u[p]) == 0) ++p;
      if (p == len_) return false;
      const T inv = T(1) / u[p];
      for (auto& e : u) e *= inv;
      for (auto& row : rows_) {
        const T c = row[p];
        if (sgn(c) == 0) continue;
        for (std::size_t a = 0; a < len_; ++a) row[a] -= c * u[a];
      }
      rows_.push_back(std::move(u));
      pivots_.push_back(p);
      return true;
    } else {
      double n0 = 0.0;
      for (const auto& e : u) n0 += std::norm(e);
      n0 = std::sqrt(n0);
      if (n0 == 0.0) return false;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& row : rows_) {
          T c(0);
          for (std::size_t a = 0; a < len_; ++a) c += std::conj(row[a]) * u[a];
          for (std::size_t a = 0; a < len_; ++a) u[a] -= c * row[a];
        }
      double n1 = 0.0;
      for (const auto& e : u) n1 += std::norm(e);
      n1 = std::sqrt(n1);
      if (n1 <= rtol_ * (ref > 0.0 ? ref : n0)) return false;
      for (auto& e : u) e /= n1;
      rows_.push_back(std::move(u));
      return true;
    }
  }

  std::size_t size() const { return rows_.size(); }

 private:
  std::size_t len_;
  double rtol_;
  std::vector<std::vector<T>> rows_;
  std::vector<std::size_t> pivots_;
};

template <class T>
bool is_invariant(const std::vector<Matrix<T>>& as, const Matrix<T>& u, double tol) {
  for (const auto& a : as)
    if (!contained_in(Matrix<T>(a * u), u, tol)) return false;
  return true;
}

/// Span of {w v : w in words} as a basis matrix.
template <class T>
Matrix<T> orbit_span(const std::vector<Matrix<T>>& algebra, const Matrix<T>& v, const NumericTol& tol) {
  Matrix<T> m(v.rows(), 0);
  for (const auto& w : algebra) m = hcat(m, Matrix<T>(w * v));
  return column_space(m, tol);
}

}  // namespace detail

/// Proper common invariant subspaces found by orbit spans of coordinate
/// vectors, kernel vectors of algebra elements (and their transposes),
/// the common kernel and the sum of images. Not exhaustive.
template <class T>
std::vector<Matrix<T>> candidate_invariant_subspaces(const std::vector<Matrix<T>>& as,
                                                     const std::vector<Matrix<T>>& algebra, double tol,
                                                     std::uint64_t seed = 1) {
  std::vector<Matrix<T>> found;
  if (as.empty()) return found;
  const std::size_t r = as.front().rows();
  const NumericTol ntol{1e-9, 1e-12};
  auto consider = [&](const Matrix<T>& u) {
    if (u.cols() == 0 || u.cols() >= r) return;
    if (!detail::is_invariant(as, u, tol)) return;
    for (const auto& f : found)
      if (f.cols() == u.cols() && contained_in(u, f, tol)) return;
    found.push_back(u);
  };
  std::vector<Matrix<T>> algebra_t;
  for (const auto& w : algebra) algebra_t.push_back(w.transpose());
  // annihilator of a subspace invariant under all transposes is invariant
  auto consider_dual = [&](const Matrix<T>& ut) {
    if (ut.cols() == 0 || ut.cols() >= r) return;
    consider(nullspace(ut.transpose(), ntol));
  };

  for (std::size_t k = 0; k < r; ++k) {
    Matrix<T> e(r, 1);
    e(k, 0) = T(1);
    consider(detail::orbit_span(algebra, e, ntol));
    consider_dual(detail::orbit_span(algebra_t, e, ntol));
  }
  // common kernel and sum of images
  {
    Matrix<T> stacked(0, r);
    Matrix<T> images(r, 0);
    for (const auto& a : as) {
      stacked = vcat(stacked, a);
      images = hcat(images, a);
    }
    consider(nullspace(stacked, ntol));
    if (images.cols()) consider(column_space(images, ntol));
  }
  // kernels of singular algebra elements
  std::vector<Matrix<T>> singular;
  for (const auto& w : algebra) singular.push_back(w);
  if constexpr (!ScalarTraits<T>::exact) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 6 && !algebra.empty(); ++trial) {
      Matrix<T> a(r, r);
      for (const auto& w : algebra) a += w * Complex(nd(rng), nd(rng));
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a));
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        singular.push_back(a - Matrix<T>::identity(r) * es.eigenvalues()(k));
    }
  }
  for (const auto& s : singular) {
    const Matrix<T> ker = nullspace(s, ntol);
    for (std::size_t c = 0; c < ker.cols(); ++c) consider(detail::orbit_span(algebra, ker.col(c), ntol));
    const Matrix<T> kert = nullspace(s.transpose(), ntol);
    for (std::size_t c = 0; c < kert.cols(); ++c) consider_dual(detail::orbit_span(algebra_t, kert.col(c), ntol));
  }
  return found;
}

/// Burnside criterion: the unital algebra generated by the A_i is all of
/// M_r. Words are closed round by round under left multiplication.
template <class T>
IrreducibilityResult<T> irreducible(const std::vector<Matrix<T>>& as, double rtol = 1e-9,
                                    double invariance_tol = 1e-8) {
  IrreducibilityResult<T> res;
  if (as.empty()) throw std::invalid_argument("irreducible: no matrices");
  const std::size_t r = as.front().rows();
  for (const auto& a : as)
    if (a.rows() != r || a.cols() != r) throw std::invalid_argument("irreducible: matrices must be square of equal size");
  detail::SpanBasis<T> span(r * r, rtol);
  std::vector<Matrix<T>> elems;
  // floating products are judged against the product of their factor norms,
  // so words that are small only because the tuple is nearly reducible do not count
  std::vector<double> bound;
  auto fro = [](const Matrix<T>& m) {
    double s = 0.0;
    for (const auto& v : m.data()) s += ScalarTraits<T>::magnitude(v) * ScalarTraits<T>::magnitude(v);
    return std::sqrt(s);
  };
  auto try_add = [&](const Matrix<T>& m, std::vector<std::size_t> word, double ref) {
    if (span.add(m.data(), ref)) {
      elems.push_back(m);
      bound.push_back(ref);
      res.words.push_back(std::move(word));
    }
  };
  try_add(Matrix<T>::identity(r), {}, std::sqrt(static_cast<double>(r)));
  while (span.size() < r * r) {
    const std::size_t before = span.size();
    const auto snapshot_elems = elems;
    const auto snapshot_words = res.words;
    const auto snapshot_bound = bound;
    for (std::size_t i = 0; i < as.size() && span.size() < r * r; ++i)
      for (std::size_t k = 0; k < snapshot_elems.size() && span.size() < r * r; ++k) {
        std::vector<std::size_t> w{i + 1};
        w.insert(w.end(), snapshot_words[k].begin(), snapshot_words[k].end());
        try_add(as[i] * snapshot_elems[k], std::move(w), fro(as[i]) * snapshot_bound[k]);
      }
    if (span.size() == before) break;
  }
  res.algebra_dim = span.size();
  res.irreducible = res.algebra_dim == r * r;
  if (!res.irreducible) {
    auto cands = candidate_invariant_subspaces(as, elems, invariance_tol);
    if (!cands.empty()) res.witness = cands.front();
  }
  return res;
}

/// Re-checks a word certificate: the listed products span M_r.
template <class T>
bool verify_burnside_words(const std::vector<Matrix<T>>& as, const std::vector<std::vector<std::size_t>>& words,
                           double rtol = 1e-9) {
  if (as.empty()) return false;
  const std::size_t r = as.front().rows();
  detail::SpanBasis<T> span(r * r, rtol);
  for (const auto& w : words) {
    Matrix<T> m = Matrix<T>::identity(r);
    double ref = std::sqrt(static_cast<double>(r));
    for (std::size_t idx : w) {
      if (idx == 0 || idx > as.size()) return false;
      m = m * as[idx - 1];
      double f = 0.0;
      for (const auto& v : as[idx - 1].data()) f += ScalarTraits<T>::magnitude(v) * ScalarTraits<T>::magnitude(v);
      ref *= std::sqrt(f);
    }
    span.add(m.data(), ref);
  }
  return span.size() == r * r;
}

// ------------------------------------------------------------ stability

enum class Stability { stable, semistable_only, unstable, inconclusive };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::semistable_only: return "semistable_only";
    case Stability::unstable: return "unstable";
    case Stability::inconclusive: return "inconclusive";
  }
  return "?";
}

template <class T>
struct StabilityResult {
  Stability verdict = Stability::inconclusive;
  Rational full_slope;
  std::optional<Matrix<T>> witness;  // destabilizing (or slope-equal) invariant subspace
  std::optional<Rational> witness_slope;
  std::vector<std::vector<std::size_t>> words;  // Burnside certificate when stable
};

struct SmallWeightsViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
StabilityResult<T> stability_verdict(const HiggsTuple<T>& h, const BridgeTol& tol = {}) {
  if (!check_small_weights(h.type))
    throw SmallWeightsViolation(
        "small-weights condition fails: stability cannot be reduced to trivial sub-objects "
        "(rank 2, four points, K = 4, weights 0 < 3 and zero Higgs field has every trivial sub-object "
        "of smaller slope yet is unstable)");
  const auto inv = check_invariants(h, tol);
  if (!inv.ok()) throw std::invalid_argument("Higgs tuple violates its invariants");
  StabilityResult<T> out;
  out.full_slope = parabolic_slope(h);
  const auto irr = irreducible(h.residues, tol.rank.rtol, tol.residual);
  if (irr.irreducible) {
    out.verdict = Stability::stable;
    out.words = irr.words;
    return out;
  }
  std::vector<Matrix<T>> algebra;
  for (const auto& w : irr.words) {
    Matrix<T> m = Matrix<T>::identity(static_cast<std::size_t>(h.rank()));
    for (std::size_t idx : w) m = m * h.residues[idx - 1];
    algebra.push_back(m);
  }
  const auto cands = candidate_invariant_subspaces(h.residues, algebra, tol.residual);
  bool equal = false;
  for (const auto& u : cands) {
    const Rational s = parabolic_slope(h, std::optional<Matrix<T>>(u), tol.rank);
    if (s > out.full_slope) {
      out.verdict = Stability::unstable;
      out.witness = u;
      out.witness_slope = s;
      return out;
    }
    if (s == out.full_slope && !equal) {
      equal = true;
      out.witness = u;
      out.witness_slope = s;
    }
  }
  out.verdict = equal ? Stability::semistable_only : Stability::inconclusive;
  return out;
}

}  // namespace hq
