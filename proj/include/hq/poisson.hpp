#pragma once

// Canonical bracket on the doubled star quiver. Positions are the f-entries,
// momenta the g-entries, with f[a][b] conjugate to g[b][a]:
//   {F, G} = sum over arrows of Tr(dF_f dG_g) - Tr(dF_g dG_f).
// Observables carry closed-form holomorphic gradients shaped like the rep.

#include "hq/ds_solver.hpp"

#include <functional>
#include <random>

namespace hq {

/// Partial derivatives shaped like a rep: f holds dF/df, g holds dF/dg.
using Gradient = CStarRep;

struct Observable {
  std::string name;
  std::function<Complex(const CStarRep&)> eval;
  std::function<Gradient(const CStarRep&)> grad;

  Complex operator()(const CStarRep& at) const { return eval(at); }
};

// ------------------------------------------------------------- coordinates

inline std::size_t coordinate_count(const StarQuiver& q) {
  std::size_t n = 0;
  for (std::size_t j = 0; j < q.num_arms(); ++j)
    for (int i = 1; i <= q.length(j); ++i) n += 2 * static_cast<std::size_t>(q.dim(j, i) * q.dim(j, i - 1));
  return n;
}

/// Per arm and level: f entries row-major, then g entries row-major.
inline Eigen::VectorXcd flatten(const CStarRep& rep) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(coordinate_count(rep.quiver)));
  Eigen::Index k = 0;
  for (std::size_t j = 0; j < rep.f.size(); ++j)
    for (std::size_t i = 0; i < rep.f[j].size(); ++i) {
      for (const auto& x : rep.f[j][i].data()) v(k++) = x;
      for (const auto& x : rep.g[j][i].data()) v(k++) = x;
    }
  return v;
}

inline CStarRep unflatten(const CStarRep& shape, const Eigen::VectorXcd& v) {
  CStarRep out = shape;
  Eigen::Index k = 0;
  for (std::size_t j = 0; j < out.f.size(); ++j)
    for (std::size_t i = 0; i < out.f[j].size(); ++i) {
      for (auto& x : out.f[j][i].data()) x = v(k++);
      for (auto& x : out.g[j][i].data()) x = v(k++);
    }
  return out;
}

/// Structure matrix J with {F, G} = dF^T J dG in flattened coordinates.
inline Eigen::MatrixXcd structure_matrix(const StarQuiver& q) {
  const auto n = static_cast<Eigen::Index>(coordinate_count(q));
  Eigen::MatrixXcd jm = Eigen::MatrixXcd::Zero(n, n);
  Eigen::Index base = 0;
  for (std::size_t j = 0; j < q.num_arms(); ++j)
    for (int i = 1; i <= q.length(j); ++i) {
      const Eigen::Index out = q.dim(j, i), in = q.dim(j, i - 1);
      const Eigen::Index gbase = base + out * in;
      for (Eigen::Index c = 0; c < out; ++c)
        for (Eigen::Index d = 0; d < in; ++d) {
          const Eigen::Index fi = base + c * in + d;   // f[c][d]
          const Eigen::Index gi = gbase + d * out + c;  // g[d][c]
          jm(fi, gi) = 1.0;
          jm(gi, fi) = -1.0;
        }
      base = gbase + out * in;
    }
  return jm;
}

// ----------------------------------------------------------------- bracket

inline Complex bracket_gradients(const Gradient& df, const Gradient& dg) {
  Complex s(0.0, 0.0);
  for (std::size_t j = 0; j < df.f.size(); ++j)
    for (std::size_t i = 0; i < df.f[j].size(); ++i) {
      if (df.f[j][i].rows() != dg.g[j][i].cols() || df.g[j][i].rows() != dg.f[j][i].cols())
        throw std::invalid_argument("bracket: gradient shape mismatch");
      s += (df.f[j][i] * dg.g[j][i]).trace() - (df.g[j][i] * dg.f[j][i]).trace();
    }
  return s;
}

inline Complex bracket(const Observable& f, const Observable& g, const CStarRep& at) {
  at.validate();
  return bracket_gradients(f.grad(at), g.grad(at));
}

/// X_F = {F, -}: f-slot -(dF/dg)^T, g-slot (dF/df)^T.
inline CStarRep hamiltonian_vector_field(const Observable& f, const CStarRep& at) {
  const Gradient d = f.grad(at);
  CStarRep x = d;
  for (std::size_t j = 0; j < d.f.size(); ++j)
    for (std::size_t i = 0; i < d.f[j].size(); ++i) {
      x.f[j][i] = d.g[j][i].transpose() * Complex(-1.0, 0.0);
      x.g[j][i] = d.f[j][i].transpose();
    }
  return x;
}

/// at + h * v, arrow by arrow.
inline CStarRep euler_step(const CStarRep& at, const CStarRep& v, double h) {
  CStarRep out = at;
  for (std::size_t j = 0; j < at.f.size(); ++j)
    for (std::size_t i = 0; i < at.f[j].size(); ++i) {
      out.f[j][i] += v.f[j][i] * Complex(h, 0.0);
      out.g[j][i] += v.g[j][i] * Complex(h, 0.0);
    }
  return out;
}

// ----------------------------------------------------- finite differences

/// Central differences in every coordinate; holomorphic observables only.
inline Gradient fd_gradient(const Observable& f, const CStarRep& at, double h = 1e-5) {
  const Eigen::VectorXcd x = flatten(at);
  Eigen::VectorXcd d(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXcd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    d(k) = (f.eval(unflatten(at, xp)) - f.eval(unflatten(at, xm))) / (2.0 * h);
  }
  return unflatten(at, d);
}

/// max |analytic - fd| / max(|analytic|_inf, 1e-12).
inline double gradient_fd_error(const Observable& f, const CStarRep& at, double h = 1e-5) {
  const Eigen::VectorXcd a = flatten(f.grad(at));
  const Eigen::VectorXcd n = flatten(fd_gradient(f, at, h));
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-12);
  return (a - n).cwiseAbs().maxCoeff() / scale;
}

struct GradientSelfTestFailure : std::logic_error {
  using std::logic_error::logic_error;
};

/// Observable with a mandatory finite-difference self-test at `probe`.
inline Observable checked_observable(Observable o, const CStarRep& probe, double rtol = 1e-6) {
  const double err = gradient_fd_error(o, probe);
  if (!(err <= rtol))
    throw GradientSelfTestFailure("gradient of " + o.name + " disagrees with finite differences (" + to_string(err) +
                                  ")");
  return o;
}

// --------------------------------------------------------- phi and I_t(z)

inline void require_regular(const CStarRep& at, const Complex& z) {
  for (const auto& x : at.points)
    if (std::abs(z - Complex(x.get_d(), 0.0)) == 0.0)
      throw std::domain_error("evaluation at a marked point (pole)");
}

inline std::vector<CMatrix> residues_of(const CStarRep& at) {
  std::vector<CMatrix> as;
  for (std::size_t j = 0; j < at.quiver.num_arms(); ++j) {
    if (at.quiver.length(j) == 0) {
      as.emplace_back(at.quiver.rank, at.quiver.rank);
      continue;
    }
    as.push_back(at.g_at(j, 1) * at.f_at(j, 1));
  }
  return as;
}

/// phi(z) = sum_m g_1^m f_1^m / (z - x_m).
inline CMatrix phi_at(const CStarRep& at, const Complex& z) {
  require_regular(at, z);
  CMatrix p(at.quiver.rank, at.quiver.rank);
  const auto as = residues_of(at);
  for (std::size_t m = 0; m < as.size(); ++m) p += as[m] / (z - Complex(at.points[m].get_d(), 0.0));
  return p;
}

inline Gradient zero_gradient(const CStarRep& at) {
  Gradient g = at;
  for (auto& arm : g.f)
    for (auto& m : arm) m = CMatrix(m.rows(), m.cols());
  for (auto& arm : g.g)
    for (auto& m : arm) m = CMatrix(m.rows(), m.cols());
  return g;
}

/// Gradient of Tr(C phi(z)) for a fixed r x r matrix C.
inline Gradient linear_phi_gradient(const CStarRep& at, const Complex& z, const CMatrix& c) {
  Gradient d = zero_gradient(at);
  for (std::size_t m = 0; m < at.quiver.num_arms(); ++m) {
    if (at.quiver.length(m) == 0) continue;
    const Complex w = Complex(1.0, 0.0) / (z - Complex(at.points[m].get_d(), 0.0));
    // Tr(C g f) / (z - x): d/df = (C g)^T w, d/dg = (f C)^T w
    d.f_at(m, 1) = (c * at.g_at(m, 1)).transpose() * w;
    d.g_at(m, 1) = (at.f_at(m, 1) * c).transpose() * w;
  }
  return d;
}

/// I_t(z) = Tr(phi(z)^t).
inline Observable invariant_observable(int t, Complex z) {
  if (t < 1) throw std::invalid_argument("I_t requires t >= 1");
  Observable o;
  o.name = "I_" + std::to_string(t);
  o.eval = [t, z](const CStarRep& at) { return power(phi_at(at, z), static_cast<unsigned>(t)).trace(); };
  o.grad = [t, z](const CStarRep& at) {
    const CMatrix p = phi_at(at, z);
    return linear_phi_gradient(at, z, power(p, static_cast<unsigned>(t - 1)) * Complex(t, 0.0));
  };
  return o;
}

inline Complex invariant_value(const CStarRep& at, int t, Complex z) { return invariant_observable(t, z).eval(at); }

/// The (i, j) entry of phi(z).
inline Observable entry_observable(std::size_t i, std::size_t j, Complex z) {
  Observable o;
  o.name = "phi_" + std::to_string(i + 1) + std::to_string(j + 1);
  o.eval = [i, j, z](const CStarRep& at) { return phi_at(at, z)(i, j); };
  o.grad = [i, j, z](const CStarRep& at) {
    const std::size_t r = static_cast<std::size_t>(at.quiver.rank);
    if (i >= r || j >= r) throw std::out_of_range("entry index out of range");
    CMatrix e(r, r);
    e(j, i) = 1.0;  // Tr(E_ji phi) = phi_ij
    require_regular(at, z);
    return linear_phi_gradient(at, z, e);
  };
  return o;
}

/// Delta(z, w) = (phi(z) - phi(w)) / (w - z); with `limit` and z == w, -phi'(w).
inline CMatrix delta(const CStarRep& at, Complex z, Complex w, bool limit = false) {
  if (z == w) {
    if (!limit) throw std::invalid_argument("delta: z = w (request the limit explicitly)");
    require_regular(at, w);
    CMatrix d(at.quiver.rank, at.quiver.rank);
    const auto as = residues_of(at);
    for (std::size_t m = 0; m < as.size(); ++m) {
      const Complex u = w - Complex(at.points[m].get_d(), 0.0);
      d += as[m] / (u * u);
    }
    return d;
  }
  return (phi_at(at, z) - phi_at(at, w)) / (w - z);
}

/// sum_m A_m / ((z - x_m)(w - x_m)), evaluated without the difference quotient.
inline CMatrix delta_partial_fractions(const CStarRep& at, Complex z, Complex w) {
  require_regular(at, z);
  require_regular(at, w);
  CMatrix d(at.quiver.rank, at.quiver.rank);
  const auto as = residues_of(at);
  for (std::size_t m = 0; m < as.size(); ++m) {
    const Complex x(at.points[m].get_d(), 0.0);
    d += as[m] / ((z - x) * (w - x));
  }
  return d;
}

/// |{phi_ij(z), phi_kl(w)} - (d_jk Delta_il - d_li Delta_kj)|.
inline double check_entry_bracket(const CStarRep& at, Complex z, Complex w, std::size_t i, std::size_t j,
                                  std::size_t k, std::size_t l) {
  const std::size_t r = static_cast<std::size_t>(at.quiver.rank);
  if (i >= r || j >= r || k >= r || l >= r) throw std::out_of_range("entry index out of range");
  const Complex lhs = bracket(entry_observable(i, j, z), entry_observable(k, l, w), at);
  const CMatrix d = delta(at, z, w);
  Complex rhs(0.0, 0.0);
  if (j == k) rhs += d(i, l);
  if (l == i) rhs -= d(k, j);
  return std::abs(lhs - rhs);
}

/// |{I_t(z), I_t'(w)}|.
inline double check_commutativity(const CStarRep& at, int t, int tp, Complex z, Complex w) {
  return std::abs(bracket(invariant_observable(t, z), invariant_observable(tp, w), at));
}

// ------------------------------------------------- quadratic observables

/// F(x) = x^T Q x / 2 + b^T x + c in flattened coordinates, Q symmetric.
struct QuadraticObservable {
  StarQuiver quiver;
  Eigen::MatrixXcd q;
  Eigen::VectorXcd b;
  Complex c{0.0, 0.0};

  Observable observable(const std::string& name = "quadratic") const {
    Observable o;
    o.name = name;
    const auto self = *this;
    o.eval = [self](const CStarRep& at) {
      const Eigen::VectorXcd x = flatten(at);
      const Complex quad = (x.transpose() * self.q * x)(0, 0);
      const Complex lin = (self.b.transpose() * x)(0, 0);
      return Complex(0.5, 0.0) * quad + lin + self.c;
    };
    o.grad = [self](const CStarRep& at) {
      const Eigen::VectorXcd x = flatten(at);
      return unflatten(at, self.q * x + self.b);
    };
    return o;
  }
};

inline QuadraticObservable random_quadratic(const StarQuiver& q, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  const auto n = static_cast<Eigen::Index>(coordinate_count(q));
  QuadraticObservable o;
  o.quiver = q;
  o.q = Eigen::MatrixXcd(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) {
      const Complex v(nd(rng), nd(rng));
      o.q(a, b) = v;
      o.q(b, a) = v;
    }
  o.b = Eigen::VectorXcd(n);
  for (Eigen::Index a = 0; a < n; ++a) o.b(a) = Complex(nd(rng), nd(rng));
  o.c = Complex(nd(rng), nd(rng));
  return o;
}

/// Closed form of {G, H} = (Q_G x + b_G)^T J (Q_H x + b_H), again quadratic.
inline QuadraticObservable bracket(const QuadraticObservable& g, const QuadraticObservable& h) {
  const Eigen::MatrixXcd j = structure_matrix(g.quiver);
  QuadraticObservable o;
  o.quiver = g.quiver;
  const Eigen::MatrixXcd m = g.q * j * h.q;
  o.q = m + m.transpose();
  o.b = g.q * j * h.b + h.q * j.transpose() * g.b;
  o.c = (g.b.transpose() * j * h.b)(0, 0);
  return o;
}

/// |{F,{G,H}} + {G,{H,F}} + {H,{F,G}}| with the inner brackets in closed form.
inline double jacobi_residual(const QuadraticObservable& f, const QuadraticObservable& g,
                              const QuadraticObservable& h, const CStarRep& at) {
  const Complex s = bracket(f.observable(), bracket(g, h).observable(), at) +
                    bracket(g.observable(), bracket(h, f).observable(), at) +
                    bracket(h.observable(), bracket(f, g).observable(), at);
  return std::abs(s);
}

/// Product observable (Leibniz checks).
inline Observable product(const Observable& a, const Observable& b) {
  Observable o;
  o.name = a.name + "*" + b.name;
  o.eval = [a, b](const CStarRep& at) { return a.eval(at) * b.eval(at); };
  o.grad = [a, b](const CStarRep& at) {
    const Complex va = a.eval(at), vb = b.eval(at);
    const Eigen::VectorXcd g = flatten(a.grad(at)) * vb + flatten(b.grad(at)) * va;
    return unflatten(at, g);
  };
  return o;
}

// ---------------------------------------------------------------- sampling

inline CStarRep random_rep(const StarQuiver& q, std::mt19937_64& rng, double scale = 0.5,
                           std::vector<Rational> points = {}) {
  std::normal_distribution<double> nd(0.0, scale);
  CStarRep rep = CStarRep::zero(q, std::move(points));
  for (auto* side : {&rep.f, &rep.g})
    for (auto& arm : *side)
      for (auto& m : arm)
        for (auto& v : m.data()) v = Complex(nd(rng), nd(rng));
  return rep;
}

/// Small-height rationals at distance >= 1/4 from every marked point and from `others`.
inline Rational sample_spectral_parameter(std::mt19937_64& rng, const std::vector<Rational>& points,
                                          const std::vector<Rational>& others = {}) {
  std::uniform_int_distribution<long> den(1, 4);
  const Rational quarter(1, 4);
  Rational lo = 0, hi = 0;
  for (const auto& x : points) {
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const long d = den(rng);
    const long low = static_cast<long>(std::floor(to_double(Rational(lo - 2)))) * d;
    // the window grows with the number of excluded values so it never runs out
    const long extra = static_cast<long>(others.size() + points.size()) / 2;
    const long span = (static_cast<long>(std::ceil(to_double(Rational(hi - lo + 4)))) + extra) * d;
    std::uniform_int_distribution<long> num(low, low + span);
    Rational z(num(rng), d);
    z.canonicalize();
    bool ok = true;
    for (const auto& x : points)
      if (abs(z - x) < quarter) ok = false;
    for (const auto& x : others)
      if (abs(z - x) < quarter) ok = false;
    if (ok) return z;
  }
  throw std::runtime_error("could not sample a spectral parameter");
}

inline Complex as_complex(const Rational& q) { return Complex(q.get_d(), 0.0); }

// -------------------------------------------------------------- count check

struct CountCheck {
  std::size_t tangent_dim = 0;    // dim ker d(mu)
  std::size_t rank = 0;           // rank of the restricted differentials
  long expected = 0;              // dim H_P
  double moment_residual = 0.0;
  std::vector<double> singular_values;
  bool ok() const { return static_cast<long>(rank) == expected; }
};

/// Jacobian of the moment map, by polarization of the quadratic map mu.
inline Eigen::MatrixXcd moment_jacobian(const CStarRep& at) {
  auto flat_mu = [](const CStarRep& rep) {
    const auto mu = moment_map(rep);
    std::vector<Complex> v(mu.center.data().begin(), mu.center.data().end());
    for (const auto& arm : mu.arms)
      for (const auto& m : arm) v.insert(v.end(), m.data().begin(), m.data().end());
    return v;
  };
  const Eigen::VectorXcd x = flatten(at);
  const auto base = flat_mu(at);
  Eigen::MatrixXcd jac(static_cast<Eigen::Index>(base.size()), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(x.size());
    e(k) = 1.0;
    // d mu(x)[e] = mu(x + e) - mu(x) - mu(e) for quadratic mu
    const auto plus = flat_mu(unflatten(at, x + e));
    const auto only = flat_mu(unflatten(at, e));
    for (std::size_t a = 0; a < base.size(); ++a) jac(static_cast<Eigen::Index>(a), k) = plus[a] - base[a] - only[a];
  }
  return jac;
}

/// Type with the rep's arm chains (weights 0, 1, ...; only multiplicities matter here).
inline ParabolicType type_of_quiver(const StarQuiver& q, const std::vector<Rational>& points) {
  ParabolicType t;
  t.line = MarkedLine{points};
  t.rank = q.rank;
  long top = 0;
  for (std::size_t j = 0; j < q.num_arms(); ++j) {
    std::vector<int> mult;
    int prev = q.rank;
    for (int g : q.arms[j]) {
      mult.push_back(prev - g);
      prev = g;
    }
    mult.push_back(prev);
    std::vector<int> kept;
    std::vector<long> w;
    for (int m : mult)
      if (m > 0) kept.push_back(m);
    for (std::size_t k = 0; k < kept.size(); ++k) w.push_back(static_cast<long>(k));
    top += w.empty() ? 0 : w.back();
    t.multiplicities.push_back(kept);
    t.weights.push_back(w);
  }
  t.K = q.rank * top + 1;
  return t;
}

/// Rank of {dI_t(z_s)} restricted to ker d(mu), against dim H_P.
inline CountCheck hamiltonian_count(const CStarRep& at, const ParabolicType& t, std::mt19937_64& rng,
                                    double rtol = 1e-8) {
  CountCheck cc;
  cc.moment_residual = moment_map(at).max_abs();
  cc.expected = hitchin_base_degrees(t).dimension;
  const Eigen::MatrixXcd jac = moment_jacobian(at);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = sv.size() ? 1e-10 * std::max(1.0, sv(0)) : 0.0;
  Eigen::Index rk = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > thr) ++rk;
  const Eigen::MatrixXcd tangent = svd.matrixV().rightCols(jac.cols() - rk);
  cc.tangent_dim = static_cast<std::size_t>(tangent.cols());
  const int r = at.quiver.rank;
  const long samples = static_cast<long>(r) * static_cast<long>(at.points.size()) + 2;
  std::vector<Rational> zs;
  for (long s = 0; s < samples; ++s) zs.push_back(sample_spectral_parameter(rng, at.points, zs));
  std::vector<Eigen::RowVectorXcd> rows;
  for (int tt = 1; tt <= r; ++tt)
    for (const auto& z : zs) {
      const Eigen::VectorXcd g = flatten(invariant_observable(tt, as_complex(z)).grad(at));
      rows.push_back(g.transpose() * tangent);
    }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), tangent.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = rows[k];
  const Eigen::VectorXd s2 = m.jacobiSvd().singularValues();
  for (Eigen::Index k = 0; k < s2.size(); ++k) cc.singular_values.push_back(s2(k));
  const double thr2 = s2.size() ? rtol * s2(0) : 0.0;
  for (Eigen::Index k = 0; k < s2.size(); ++k)
    if (s2(k) > thr2) ++cc.rank;
  return cc;
}

// ------------------------------------------------------------- grid report

struct PoissonOptions {
  int grid = 100;         // (rep, z, w) samples for the commutativity sweep
  std::uint64_t seed = 1;
  int max_t = 4;
  int entry_pairs = 5;    // (z, w) pairs for the entry sweep
  int jacobi_samples = 10;
  int gradient_samples = 20;
  bool count_check = true;
};

struct PoissonReport {
  double entry_bracket_max = 0.0;
  double commutativity_max = 0.0;
  double commutativity_t11_max = 0.0;
  double antisymmetry_max = 0.0;
  double jacobi_max = 0.0;
  double gradient_rel_max = 0.0;
  double delta_identity_max = 0.0;
  double delta_partial_fraction_max = 0.0;
  std::optional<CountCheck> count;
  std::size_t samples = 0;
};

/// Sweeps the bracket identities at `at` and at random perturbations of its shape.
/// The count check uses `at` itself and needs it moment-zero.
inline PoissonReport poisson_check(const CStarRep& at, const PoissonOptions& opt = {}) {
  at.validate();
  PoissonReport rep;
  std::mt19937_64 rng(opt.seed);
  const std::size_t r = static_cast<std::size_t>(at.quiver.rank);
  auto random_at = [&](int k) { return k == 0 ? at : random_rep(at.quiver, rng, 0.5, at.points); };
  for (int e = 0; e < opt.entry_pairs; ++e) {
    const CStarRep x = random_at(e);
    const Rational z = sample_spectral_parameter(rng, x.points);
    const Rational w = sample_spectral_parameter(rng, x.points, {z});
    const Complex zc = as_complex(z), wc = as_complex(w);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k)
          for (std::size_t l = 0; l < r; ++l)
            rep.entry_bracket_max = std::max(rep.entry_bracket_max, check_entry_bracket(x, zc, wc, i, j, k, l));
    const CMatrix d = delta(x, zc, wc);
    rep.delta_identity_max =
        std::max(rep.delta_identity_max, max_abs(d * (wc - zc) - (phi_at(x, zc) - phi_at(x, wc))));
    rep.delta_partial_fraction_max =
        std::max(rep.delta_partial_fraction_max, max_abs(d - delta_partial_fractions(x, zc, wc)));
  }
  for (int s = 0; s < opt.grid; ++s) {
    const CStarRep x = random_at(s);
    const Rational z = sample_spectral_parameter(rng, x.points);
    const Rational w = sample_spectral_parameter(rng, x.points, {z});
    std::uniform_int_distribution<int> td(1, opt.max_t);
    const int t = td(rng), tp = td(rng);
    rep.commutativity_max = std::max(rep.commutativity_max, check_commutativity(x, t, tp, as_complex(z), as_complex(w)));
    rep.commutativity_t11_max =
        std::max(rep.commutativity_t11_max, check_commutativity(x, 1, 1, as_complex(z), as_complex(w)));
    const auto it = invariant_observable(t, as_complex(z));
    rep.antisymmetry_max = std::max(rep.antisymmetry_max, std::abs(bracket(it, it, x)));
    ++rep.samples;
  }
  for (int s = 0; s < opt.gradient_samples; ++s) {
    const CStarRep x = random_rep(at.quiver, rng, 0.5, at.points);
    const Rational z = sample_spectral_parameter(rng, x.points);
    std::uniform_int_distribution<int> td(1, opt.max_t);
    rep.gradient_rel_max =
        std::max(rep.gradient_rel_max, gradient_fd_error(invariant_observable(td(rng), as_complex(z)), x));
  }
  for (int s = 0; s < opt.jacobi_samples; ++s) {
    const CStarRep x = random_at(s);
    const auto f = random_quadratic(at.quiver, rng, 0.5);
    const auto g = random_quadratic(at.quiver, rng, 0.5);
    const auto h = random_quadratic(at.quiver, rng, 0.5);
    rep.jacobi_max = std::max(rep.jacobi_max, jacobi_residual(f, g, h, x));
  }
  if (opt.count_check && moment_map(at).max_abs() <= 1e-8) {
    rep.count = hamiltonian_count(at, type_of_quiver(at.quiver, at.points), rng);
  }
  return rep;
}

}  // namespace hq
