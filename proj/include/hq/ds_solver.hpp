#pragma once

// Nilpotent additive Deligne-Simpson solver: find A_i = P_i N_i P_i^{-1}
// with sum A_i = 0 by descent on the conjugators, then certify rank
// profile and irreducibility. Includes the passage to Higgs tuples and an
// exact rationalization used for certified Hitchin checks.

#include "hq/hitchin_spectral.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace hq {

struct DSInstance {
  int rank = 0;
  std::vector<NilpotentClass> classes;
  std::vector<Rational> points;  // defaults to 0, 1, ..., n-1

  std::size_t size() const { return classes.size(); }
  MarkedLine line() const {
    if (points.empty()) return MarkedLine::standard(classes.size());
    return MarkedLine{points};
  }
  void validate() const {
    if (rank <= 0) throw std::invalid_argument("instance rank must be positive");
    if (classes.empty()) throw std::invalid_argument("instance needs at least one class");
    for (const auto& c : classes) {
      c.validate();
      if (c.rank != rank) throw std::invalid_argument("all classes must have the instance rank");
    }
    if (!points.empty() && points.size() != classes.size())
      throw std::invalid_argument("one marked point per class required");
    line().validate(true);
  }
};

struct DSConfig {
  double tolerance = 1e-10;  // success when |sum A_i|_F <= tolerance
  int max_iters = 400;
  int restarts = 20;
  std::uint64_t seed = 1;
  double rank_rtol = 1e-8;   // relative singular-value threshold for rank profiles
  double cond_limit = 1e8;   // restart when a conjugator is worse conditioned
  std::optional<CMatrix> frame;  // optional unitary Q: representatives Q N_i Q^*
};

/// Jordan normal form with blocks from the class partition (superdiagonal ones).
inline CMatrix jordan_form(const NilpotentClass& c) {
  CMatrix n(static_cast<std::size_t>(c.rank), static_cast<std::size_t>(c.rank));
  std::size_t off = 0;
  for (int b : c.partition()) {
    for (int k = 0; k + 1 < b; ++k) n(off + k, off + k + 1) = 1.0;
    off += static_cast<std::size_t>(b);
  }
  return n;
}

/// Position of each coordinate inside its Jordan block (0-based).
inline std::vector<int> jordan_positions(const NilpotentClass& c) {
  std::vector<int> pos;
  for (int b : c.partition())
    for (int k = 0; k < b; ++k) pos.push_back(k);
  pos.resize(static_cast<std::size_t>(c.rank), 0);
  return pos;
}

/// Phi = |sum_i P_i N_i P_i^{-1}|_F^2.
inline double ds_objective(const std::vector<CMatrix>& ps, const std::vector<CMatrix>& ns) {
  CMatrix s(ns.front().rows(), ns.front().cols());
  for (std::size_t i = 0; i < ps.size(); ++i) s += ps[i] * ns[i] * inverse(ps[i]);
  const double f = frobenius_norm(s);
  return f * f;
}

/// Gradient of Phi in the left-translated directions X_i (P_i -> (I + X_i) P_i):
/// G_i = 2 [S, A_i^*], so dPhi(X) = Re sum_i <G_i, X_i>.
inline std::vector<CMatrix> ds_gradient(const std::vector<CMatrix>& as) {
  CMatrix s(as.front().rows(), as.front().cols());
  for (const auto& a : as) s += a;
  std::vector<CMatrix> g;
  for (const auto& a : as) g.push_back(commutator(s, a.adjoint()) * Complex(2.0, 0.0));
  return g;
}

inline double real_inner(const CMatrix& a, const CMatrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) s += (std::conj(a.data()[k]) * b.data()[k]).real();
  return s;
}

struct RestartRecord {
  int index = 0;
  std::string status;  // converged, stagnated, ill-conditioned, reducible, profile-mismatch, budget
  int iterations = 0;
  double best_residual = 0.0;
  std::vector<double> history;  // |S|_F after each accepted step
};

struct DSSolution {
  DSInstance instance;
  std::vector<CMatrix> matrices;     // A_i
  std::vector<CMatrix> conjugators;  // P_i with A_i = P_i N_i P_i^{-1} (before refinement)
  std::vector<CMatrix> representatives;  // N_i used
  double residual = 0.0;             // |sum A_i|_F
  int restart = -1;
  bool refined = false;              // A_n replaced by -sum_{i<n} A_i
  bool irreducible = false;          // false only for the zero tuple of all-zero classes, r > 1
  std::vector<std::vector<int>> ranks;
  std::vector<std::vector<std::size_t>> words;  // Burnside certificate
};

struct DSResult {
  bool success = false;
  std::optional<DSSolution> solution;
  std::vector<RestartRecord> restarts;
  DsFeasibility feasibility;
};

namespace detail {

inline std::vector<CMatrix> conjugate_all(const std::vector<CMatrix>& ps, const std::vector<CMatrix>& ns) {
  std::vector<CMatrix> as;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Eigen::MatrixXcd p = to_eigen(ps[i]);
    const Eigen::MatrixXcd a = p * to_eigen(ns[i]) * p.partialPivLu().inverse();
    as.push_back(from_eigen(a));
  }
  return as;
}

inline CMatrix sum_of(const std::vector<CMatrix>& as) {
  CMatrix s(as.front().rows(), as.front().cols());
  for (const auto& a : as) s += a;
  return s;
}

inline double scale_sq(const std::vector<CMatrix>& as) {
  double t = 0.0;
  for (const auto& a : as) {
    const double f = frobenius_norm(a);
    t += f * f;
  }
  return t;
}

/// Minimum-norm solution of sum_i [X_i, A_i] = -S.
inline std::vector<CMatrix> gauss_newton_direction(const std::vector<CMatrix>& as, const CMatrix& s) {
  const std::size_t r = s.rows();
  const std::size_t n = as.size();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r * r), static_cast<Eigen::Index>(n * r * r));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        const auto col = static_cast<Eigen::Index>(i * r * r + a * r + b);
        // [E_ab, A] = E_ab A - A E_ab
        for (std::size_t q = 0; q < r; ++q) j(static_cast<Eigen::Index>(a * r + q), col) += as[i](b, q);
        for (std::size_t p = 0; p < r; ++p) j(static_cast<Eigen::Index>(p * r + b), col) -= as[i](p, a);
      }
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(r * r));
  for (std::size_t p = 0; p < r; ++p)
    for (std::size_t q = 0; q < r; ++q) rhs(static_cast<Eigen::Index>(p * r + q)) = -s(p, q);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(j);
  cod.setThreshold(1e-10);
  const Eigen::VectorXcd x = cod.solve(rhs);
  std::vector<CMatrix> xs;
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix m(r, r);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) m(a, b) = x(static_cast<Eigen::Index>(i * r * r + a * r + b));
    xs.push_back(std::move(m));
  }
  return xs;
}

inline std::vector<CMatrix> step(const std::vector<CMatrix>& ps, const std::vector<CMatrix>& xs, double t) {
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < ps.size(); ++i)
    out.push_back((CMatrix::identity(ps[i].rows()) + xs[i] * Complex(t, 0.0)) * ps[i]);
  return out;
}

}  // namespace detail

/// Certification of a candidate tuple against the instance.
struct DSCertificate {
  double residual = 0.0;
  std::vector<std::vector<int>> ranks;
  bool profile_ok = false;
  IrreducibilityResult<Complex> irreducibility;
};

inline DSCertificate certify(const std::vector<CMatrix>& as, const std::vector<NilpotentClass>& classes,
                             double rank_rtol) {
  DSCertificate c;
  c.residual = frobenius_norm(detail::sum_of(as));
  c.ranks = rank_profile(as, NumericTol{rank_rtol, 1e-300});
  c.profile_ok = profile_matches(c.ranks, classes);
  c.irreducibility = irreducible(as, 1e-9, 1e-7);
  return c;
}

inline DSResult solve(const DSInstance& inst, const DSConfig& cfg = {}) {
  inst.validate();
  DSResult res;
  res.feasibility = ds_feasible(inst.classes, inst.rank);
  const std::size_t r = static_cast<std::size_t>(inst.rank);
  const std::size_t n = inst.size();

  std::vector<CMatrix> ns;
  std::vector<std::vector<int>> positions;
  for (const auto& c : inst.classes) {
    CMatrix nj = jordan_form(c);
    if (cfg.frame) nj = *cfg.frame * nj * cfg.frame->adjoint();
    ns.push_back(nj);
    positions.push_back(jordan_positions(c));
  }
  const double target_scale = detail::scale_sq(ns);

  auto finish = [&](std::vector<CMatrix> ps, std::vector<CMatrix> as, int restart) {
    DSSolution sol;
    sol.instance = inst;
    sol.conjugators = std::move(ps);
    sol.representatives = ns;
    sol.restart = restart;
    // exactness refinement on the last matrix
    if (n >= 2) {
      CMatrix last(r, r);
      for (std::size_t i = 0; i + 1 < n; ++i) last -= as[i];
      const auto ranks = rank_profile(std::vector<CMatrix>{last}, NumericTol{cfg.rank_rtol, 1e-300});
      if (profile_matches(ranks, {inst.classes.back()})) {
        as.back() = last;
        sol.refined = true;
      }
    }
    sol.matrices = std::move(as);
    return sol;
  };

  // all classes zero: A_i = 0 solves immediately
  if (target_scale == 0.0) {
    std::vector<CMatrix> ps(n, CMatrix::identity(r));
    std::vector<CMatrix> as(n, CMatrix(r, r));
    DSSolution sol = finish(ps, as, 0);
    const auto cert = certify(sol.matrices, inst.classes, cfg.rank_rtol);
    sol.residual = cert.residual;
    sol.ranks = cert.ranks;
    sol.words = cert.irreducibility.words;
    sol.irreducible = cert.irreducibility.irreducible;
    res.restarts.push_back(RestartRecord{0, "trivial", 0, 0.0, {}});
    // the zero tuple is the solution; it is reported, not certified irreducible
    res.success = true;
    res.solution = std::move(sol);
    return res;
  }

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    RestartRecord rec;
    rec.index = restart;
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> nd;
    std::vector<CMatrix> ps;
    for (std::size_t i = 0; i < n; ++i) {
      CMatrix p(r, r);
      for (auto& v : p.data()) v = Complex(nd(rng), 0.0);
      if (cfg.frame) p = p * cfg.frame->adjoint();
      ps.push_back(std::move(p));
    }

    auto rescale = [&](std::vector<CMatrix>& cur) {
      const auto as = detail::conjugate_all(cur, ns);
      const double s2 = detail::scale_sq(as);
      if (s2 <= 0.0) return;
      const double c = std::sqrt(target_scale / s2);
      for (std::size_t i = 0; i < n; ++i) {
        CMatrix d(r, r);
        for (std::size_t k = 0; k < r; ++k) d(k, k) = std::pow(c, -positions[i][k]);
        if (cfg.frame) d = *cfg.frame * d * cfg.frame->adjoint();
        cur[i] = cur[i] * d;
      }
    };

    auto ill_conditioned = [&](const std::vector<CMatrix>& cur) {
      for (const auto& p : cur)
        if (condition_number(p) > cfg.cond_limit) return true;
      return false;
    };

    rescale(ps);
    std::vector<CMatrix> as = detail::conjugate_all(ps, ns);
    double phi = std::pow(frobenius_norm(detail::sum_of(as)), 2);
    rec.best_residual = std::sqrt(phi);
    rec.status = "budget";
    bool converged = false;
    int polish = 0;
    for (int it = 0; it < cfg.max_iters; ++it) {
      rec.iterations = it + 1;
      if (phi <= cfg.tolerance * cfg.tolerance) {
        converged = true;
        if (++polish > 2 || phi == 0.0) break;
      }
      const CMatrix s = detail::sum_of(as);
      bool accepted = false;
      std::vector<CMatrix> next;
      double next_phi = phi;
      // Gauss-Newton with backtracking
      const auto xs = detail::gauss_newton_direction(as, s);
      for (double t = 1.0; t > 1e-3; t *= 0.5) {
        auto cand = detail::step(ps, xs, t);
        const double f = ds_objective(cand, ns);
        if (std::isfinite(f) && f < phi) {
          next = std::move(cand);
          next_phi = f;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // gradient step with Armijo backtracking
        const auto g = ds_gradient(as);
        double g2 = 0.0;
        for (const auto& gi : g) g2 += real_inner(gi, gi);
        if (g2 > 0.0) {
          std::vector<CMatrix> dir;
          for (const auto& gi : g) dir.push_back(gi * Complex(-1.0, 0.0));
          for (double t = phi / g2; t > 1e-16; t *= 0.5) {
            auto cand = detail::step(ps, dir, t);
            const double f = ds_objective(cand, ns);
            if (std::isfinite(f) && f <= phi - 1e-4 * t * g2) {
              next = std::move(cand);
              next_phi = f;
              accepted = true;
              break;
            }
          }
        }
      }
      if (!accepted) {
        rec.status = converged ? "converged" : "stagnated";
        break;
      }
      rec.history.push_back(std::sqrt(next_phi));
      ps = std::move(next);
      rescale(ps);
      as = detail::conjugate_all(ps, ns);
      phi = std::pow(frobenius_norm(detail::sum_of(as)), 2);
      rec.best_residual = std::min(rec.best_residual, std::sqrt(phi));
      if (ill_conditioned(ps)) {
        rec.status = "ill-conditioned";
        break;
      }
    }
    if (phi <= cfg.tolerance * cfg.tolerance && rec.status != "ill-conditioned") converged = true;
    if (!converged) {
      res.restarts.push_back(rec);
      continue;
    }
    DSSolution sol = finish(ps, as, restart);
    const auto cert = certify(sol.matrices, inst.classes, cfg.rank_rtol);
    sol.residual = cert.residual;
    sol.ranks = cert.ranks;
    rec.best_residual = std::min(rec.best_residual, cert.residual);
    if (!cert.profile_ok) {
      rec.status = "profile-mismatch";
    } else if (!cert.irreducibility.irreducible) {
      rec.status = "reducible";
    } else if (cert.residual > cfg.tolerance) {
      rec.status = "budget";
    } else {
      rec.status = "converged";
      sol.words = cert.irreducibility.words;
      sol.irreducible = true;
      res.restarts.push_back(rec);
      res.success = true;
      res.solution = std::move(sol);
      return res;
    }
    res.restarts.push_back(rec);
  }
  return res;
}

// ------------------------------------------------------------ verification

struct VerifyTol {
  double residual = 1e-10;
  double rank_rtol = 1e-8;
};

struct HitchinCrossCheck {
  bool rationalized = false;
  bool exact_profile = false;
  bool member = false;
  bool exact_orders = false;
  std::int64_t denominator_bound = 0;
  std::optional<VanishingReport> orders;
  std::optional<HitchinPoint> point;
  std::string note;
};

struct VerifyReport {
  double residual = 0.0;
  bool residual_ok = false;
  std::vector<std::vector<int>> ranks;
  bool profile_ok = false;
  bool irreducible = false;
  std::vector<std::vector<std::size_t>> words;
  std::optional<CMatrix> witness;
  std::optional<HitchinCrossCheck> hitchin;

  bool ok() const {
    return residual_ok && profile_ok && irreducible && (!hitchin || (hitchin->member && hitchin->exact_orders));
  }
};

/// Flags F^{i,j} at x_i refining the image filtration of A_i, adapted to the type.
struct FlagsResult {
  CHiggsTuple tuple;
  bool completion_used = false;  // some step is not an image Im(A_i^j)
};

inline FlagsResult flags_from_solution(const std::vector<CMatrix>& as, const ParabolicType& t, double rank_rtol = 1e-8) {
  t.validate(true);
  if (as.size() != t.num_points()) throw std::invalid_argument("one residue per marked point required");
  const NumericTol tol{rank_rtol, 1e-300};
  const std::size_t r = static_cast<std::size_t>(t.rank);
  FlagsResult out;
  out.tuple.type = t;
  out.tuple.residues = as;
  for (std::size_t x = 0; x < as.size(); ++x) {
    const auto gam = t.gamma_chain(x);
    const int s = t.sigma(x);
    std::vector<CMatrix> steps(static_cast<std::size_t>(std::max(0, s - 1)));
    // build from the deepest step outward
    CMatrix below(r, 0);  // F^{j+1}
    for (int j = s - 1; j >= 1; --j) {
      const auto want = static_cast<std::size_t>(gam[j]);
      const CMatrix img = column_space(power(as[x], static_cast<unsigned>(j)), tol);
      CMatrix fj;
      if (img.cols() == want && contained_in(below, img, 1e-7)) {
        fj = img;
      } else {
        out.completion_used = true;
        // preimage of F^{j+1}: U = {v : A v in F^{j+1}}
        CMatrix u;
        if (below.cols() == 0) {
          u = nullspace(as[x], tol);
        } else {
          const CMatrix ann = nullspace(below.adjoint(), tol).adjoint();  // rows annihilate F^{j+1}
          u = ann.rows() ? nullspace(ann * as[x], tol) : CMatrix::identity(r);
        }
        fj = below;
        auto extend = [&](const CMatrix& cands) {
          for (std::size_t c = 0; c < cands.cols() && fj.cols() < want; ++c) {
            const CMatrix v = cands.col(c);
            if (!contained_in(v, u, 1e-7)) continue;
            const CMatrix trial = hcat(fj, v);
            if (rank(trial, tol) == trial.cols()) fj = trial;
          }
        };
        extend(img);
        extend(u);
        if (fj.cols() != want)
          throw std::invalid_argument("rank profile does not admit the requested flag type at point " +
                                      std::to_string(x + 1));
        fj = column_space(fj, tol);
      }
      steps[static_cast<std::size_t>(j - 1)] = fj;
      below = fj;
    }
    out.tuple.flags.push_back(std::move(steps));
  }
  const auto inv = check_invariants(out.tuple, BridgeTol{1e-7, tol});
  if (!inv.dims_ok || !inv.nested_ok || !inv.strong_preservation)
    throw std::invalid_argument("rank profile does not match the type (flags violate strong preservation)");
  return out;
}

/// Exact tuple near a floating one: flags rounded to rational adapted bases,
/// residues projected onto the rational space of flag-lowering tuples with
/// zero sum, coordinates rounded. Returns nullopt if the space is degenerate.
inline std::optional<QHiggsTuple> rationalize_higgs(const CHiggsTuple& h, std::int64_t max_den) {
  const std::size_t r = static_cast<std::size_t>(h.rank());
  const std::size_t n = h.num_points();
  QHiggsTuple q;
  q.type = h.type;
  std::vector<QMatrix> gs, ginv;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slots;
  for (std::size_t x = 0; x < n; ++x) {
    const auto gam = h.type.gamma_chain(x);
    const int s = h.type.sigma(x);
    // adapted orthonormal basis: deepest step first, then successive complements
    CMatrix basis(r, 0);
    for (int j = s; j >= 0; --j) {
      const CMatrix f = h.flag(x, j);
      if (f.cols() == 0) continue;
      CMatrix add = f;
      if (basis.cols()) add = f - basis * (basis.adjoint() * f);
      const CMatrix ext = column_space(add, NumericTol{1e-8, 1e-300});
      basis = hcat(basis, ext);
    }
    if (basis.cols() != r) return std::nullopt;
    // reduce to a basis with identity rows at well-conditioned pivots, then round
    QMatrix g(r, r);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        const Complex v = basis(a, b);
        if (std::abs(v.imag()) > 1e-6) return std::nullopt;
        g(a, b) = approximate_rational(v.real(), max_den);
      }
    if (rank(g) != r) return std::nullopt;
    // level of basis column k: largest j with k < gamma_j
    std::vector<int> lev(r, 0);
    for (std::size_t k = 0; k < r; ++k)
      for (int j = 0; j < s; ++j)
        if (static_cast<int>(k) < gam[j]) lev[k] = j;
    std::vector<std::pair<std::size_t, std::size_t>> sl;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        if (lev[a] > lev[b]) sl.emplace_back(a, b);
    std::vector<QMatrix> fl;
    for (int j = 1; j < s; ++j) fl.push_back(g.block(0, 0, r, static_cast<std::size_t>(gam[j])));
    q.flags.push_back(std::move(fl));
    gs.push_back(g);
    ginv.push_back(inverse(g));
    slots.push_back(std::move(sl));
  }
  // constraint: sum_i G_i E G_i^{-1} = 0 over the allowed slots
  std::size_t total = 0;
  for (const auto& sl : slots) total += sl.size();
  QMatrix cons(r * r, total);
  std::size_t col = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (const auto& [a, b] : slots[x]) {
      // G E_ab G^{-1} = (column a of G)(row b of G^{-1})
      for (std::size_t p = 0; p < r; ++p)
        for (std::size_t qq = 0; qq < r; ++qq) cons(p * r + qq, col) = gs[x](p, a) * ginv[x](b, qq);
      ++col;
    }
  const QMatrix kernel = nullspace(cons);
  if (kernel.cols() == 0) return std::nullopt;
  // float coordinates of the given residues in the slot parametrization
  Eigen::VectorXd u(static_cast<Eigen::Index>(total));
  col = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const CMatrix local = to_complex(ginv[x]) * h.residues[x] * to_complex(gs[x]);
    for (const auto& [a, b] : slots[x]) u(static_cast<Eigen::Index>(col++)) = local(a, b).real();
  }
  Eigen::MatrixXd kd(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(kernel.cols()));
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t k = 0; k < kernel.cols(); ++k) kd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = kernel(i, k).get_d();
  const Eigen::VectorXd coef = kd.colPivHouseholderQr().solve(u);
  std::vector<Rational> cq;
  for (Eigen::Index k = 0; k < coef.size(); ++k) cq.push_back(approximate_rational(coef(k), max_den));
  col = 0;
  for (std::size_t x = 0; x < n; ++x) {
    QMatrix local(r, r);
    for (const auto& [a, b] : slots[x]) {
      Rational v = 0;
      for (std::size_t k = 0; k < kernel.cols(); ++k) v += kernel(col, k) * cq[k];
      local(a, b) = v;
      ++col;
    }
    q.residues.push_back(gs[x] * local * ginv[x]);
  }
  return q;
}

/// Exact Hitchin check of a floating solution: rationalize at growing
/// denominator bounds until the exact rank profile matches, then compute
/// the characteristic polynomial and vanishing orders exactly.
inline HitchinCrossCheck hitchin_cross_check(const std::vector<CMatrix>& as, const DSInstance& inst,
                                             double rank_rtol = 1e-8) {
  HitchinCrossCheck hc;
  const ParabolicType t = type_from_classes(inst.classes, inst.line());
  const FlagsResult fr = flags_from_solution(as, t, rank_rtol);
  for (std::int64_t den : {std::int64_t{1000}, std::int64_t{1000000}, std::int64_t{1000000000}}) {
    const auto q = rationalize_higgs(fr.tuple, den);
    if (!q) continue;
    const auto inv = check_invariants(*q);
    if (!inv.ok()) continue;
    if (!profile_matches(rank_profile(q->residues), inst.classes)) continue;
    hc.rationalized = true;
    hc.exact_profile = true;
    hc.denominator_bound = den;
    const HitchinPoint hp = char_poly(*q);
    const VanishingReport vr = vanishing_orders(hp, t);
    hc.member = vr.member;
    hc.exact_orders = vr.exact_orders;
    hc.orders = vr;
    hc.point = hp;
    hc.note = fr.completion_used ? "flag completion used" : "image filtration";
    return hc;
  }
  hc.note = "rationalization did not preserve the rank profile";
  return hc;
}

inline VerifyReport verify(const std::vector<CMatrix>& as, const DSInstance& inst, const VerifyTol& tol = {},
                           bool hitchin = false) {
  inst.validate();
  if (as.size() != inst.size()) throw std::invalid_argument("solution has the wrong number of matrices");
  for (const auto& a : as)
    if (a.rows() != static_cast<std::size_t>(inst.rank) || a.cols() != static_cast<std::size_t>(inst.rank))
      throw std::invalid_argument("solution matrices have the wrong shape");
  VerifyReport rep;
  const auto cert = certify(as, inst.classes, tol.rank_rtol);
  rep.residual = cert.residual;
  rep.residual_ok = cert.residual <= tol.residual;
  rep.ranks = cert.ranks;
  rep.profile_ok = cert.profile_ok;
  rep.irreducible = cert.irreducibility.irreducible;
  rep.words = cert.irreducibility.words;
  rep.witness = cert.irreducibility.witness;
  if (hitchin && rep.profile_ok) rep.hitchin = hitchin_cross_check(as, inst, tol.rank_rtol);
  return rep;
}

inline VerifyReport verify(const DSSolution& sol, const VerifyTol& tol = {}, bool hitchin = false) {
  return verify(sol.matrices, sol.instance, tol, hitchin);
}

/// StarRep of a solution through its Higgs tuple (flags from the image filtration).
inline CStarRep solution_to_rep(const std::vector<CMatrix>& as, const DSInstance& inst, double rank_rtol = 1e-8) {
  const ParabolicType t = type_from_classes(inst.classes, inst.line());
  const FlagsResult fr = flags_from_solution(as, t, rank_rtol);
  return higgs_to_quiver(fr.tuple, BridgeTol{1e-7, NumericTol{rank_rtol, 1e-300}});
}

}  // namespace hq
