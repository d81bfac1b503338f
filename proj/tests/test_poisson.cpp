#include "test_support.hpp"

using namespace hq;
using hq::testing::random_group_element;

namespace {

ParabolicType type_with(int r, std::vector<std::vector<int>> mults) {
  ParabolicType t;
  t.rank = r;
  t.line = MarkedLine::standard(mults.size());
  long top = 0;
  for (const auto& m : mults) {
    std::vector<long> w(m.size());
    std::iota(w.begin(), w.end(), 0L);
    top += w.back();
    t.weights.push_back(w);
  }
  t.multiplicities = std::move(mults);
  t.K = r * top + 1;
  return t;
}

std::vector<StarQuiver> small_quivers() {
  return {
      build_star_quiver(type_with(2, {{1, 1}, {1, 1}, {1, 1}, {1, 1}})),
      build_star_quiver(type_with(3, {{1, 1, 1}, {2, 1}, {1, 2}, {1, 1, 1}})),
      build_star_quiver(type_with(3, {{1, 1, 1}, {1, 1, 1}, {3}, {2, 1}, {1, 1, 1}})),
  };
}

// {F, G} by the pairing of each arrow f (out x in) with its partner g (in x out),
// computed from finite-difference gradients only.
Complex fd_bracket(const Observable& a, const Observable& b, const CStarRep& at) {
  const Gradient da = fd_gradient(a, at), db = fd_gradient(b, at);
  Complex s(0.0, 0.0);
  for (std::size_t j = 0; j < at.f.size(); ++j)
    for (std::size_t i = 0; i < at.f[j].size(); ++i) {
      const CMatrix& fa = da.f[j][i];
      const CMatrix& ga = da.g[j][i];
      const CMatrix& fb = db.f[j][i];
      const CMatrix& gb = db.g[j][i];
      for (std::size_t c = 0; c < fa.rows(); ++c)
        for (std::size_t d = 0; d < fa.cols(); ++d) s += fa(c, d) * gb(d, c) - ga(d, c) * fb(c, d);
    }
  return s;
}

std::vector<Rational> spectral_pair(std::mt19937_64& rng, const std::vector<Rational>& pts) {
  const Rational z = sample_spectral_parameter(rng, pts);
  return {z, sample_spectral_parameter(rng, pts, {z})};
}

CStarRep scaled(const CStarRep& rep, double c) {
  CStarRep out = rep;
  for (auto* side : {&out.f, &out.g})
    for (auto& arm : *side)
      for (auto& m : arm) m = m * Complex(c, 0.0);
  return out;
}

}  // namespace

TEST(Bracket, StructureMatrixIsAntisymmetric) {
  for (const auto& q : small_quivers()) {
    const Eigen::MatrixXcd j = structure_matrix(q);
    EXPECT_EQ(j.rows(), static_cast<Eigen::Index>(coordinate_count(q)));
    EXPECT_LT((j + j.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Bracket, AgreesWithFiniteDifferenceOracle) {
  std::mt19937_64 rng(21);
  for (const auto& q : small_quivers()) {
    const CStarRep at = random_rep(q, rng);
    const auto zw = spectral_pair(rng, at.points);
    const Complex z = as_complex(zw[0]), w = as_complex(zw[1]);
    const auto a = invariant_observable(2, z);
    const auto b = entry_observable(0, 1, w);
    const auto c = random_quadratic(q, rng).observable();
    EXPECT_LT(std::abs(bracket(a, b, at) - fd_bracket(a, b, at)), 1e-6);
    EXPECT_LT(std::abs(bracket(b, c, at) - fd_bracket(b, c, at)), 1e-6);
  }
}

TEST(Bracket, EntryFormulaOverAllIndexTuples) {
  std::mt19937_64 rng(22);
  double worst = 0.0;
  for (const auto& q : small_quivers())
    for (int rep = 0; rep < 3; ++rep) {
      const CStarRep at = random_rep(q, rng);
      for (int s = 0; s < 3; ++s) {
        const auto zw = spectral_pair(rng, at.points);
        const std::size_t r = static_cast<std::size_t>(q.rank);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k)
              for (std::size_t l = 0; l < r; ++l)
                worst = std::max(worst, check_entry_bracket(at, as_complex(zw[0]), as_complex(zw[1]), i, j, k, l));
      }
    }
  EXPECT_LT(worst, 1e-9);
}

TEST(Bracket, InvariantsCommute) {
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (const auto& q : small_quivers())
    for (int s = 0; s < 12; ++s) {
      const CStarRep at = random_rep(q, rng);
      const auto zw = spectral_pair(rng, at.points);
      for (int t = 1; t <= 4; ++t)
        for (int tp = 1; tp <= 4; ++tp)
          worst = std::max(worst, check_commutativity(at, t, tp, as_complex(zw[0]), as_complex(zw[1])));
    }
  EXPECT_LT(worst, 1e-8);
}

TEST(Bracket, AntisymmetryLeibnizAndJacobi) {
  std::mt19937_64 rng(24);
  for (const auto& q : small_quivers()) {
    const CStarRep at = random_rep(q, rng);
    const auto f = random_quadratic(q, rng), g = random_quadratic(q, rng), h = random_quadratic(q, rng);
    const auto fo = f.observable(), go = g.observable(), ho = h.observable();
    EXPECT_LT(std::abs(bracket(fo, go, at) + bracket(go, fo, at)), 1e-12);
    const Complex leib = bracket(fo, product(go, ho), at) - (go(at) * bracket(fo, ho, at) + ho(at) * bracket(fo, go, at));
    EXPECT_LT(std::abs(leib), 1e-9 * std::max(1.0, std::abs(go(at) * bracket(fo, ho, at))));
    EXPECT_LT(jacobi_residual(f, g, h, at), 1e-9);
    // closed-form bracket of quadratics matches the pointwise one
    EXPECT_LT(std::abs(bracket(f, g).observable()(at) - bracket(fo, go, at)), 1e-10);
  }
}

TEST(Delta, IdentitiesAndLimit) {
  std::mt19937_64 rng(25);
  const auto q = small_quivers()[1];
  const CStarRep at = random_rep(q, rng);
  const auto zw = spectral_pair(rng, at.points);
  const Complex z = as_complex(zw[0]), w = as_complex(zw[1]);
  const CMatrix d = delta(at, z, w);
  EXPECT_LT(max_abs(d * (w - z) - (phi_at(at, z) - phi_at(at, w))), 1e-12);
  EXPECT_LT(max_abs(d - delta_partial_fractions(at, z, w)), 1e-12);
  EXPECT_THROW(delta(at, z, z), std::invalid_argument);
  const double h = 1e-5;
  const CMatrix dphi = (phi_at(at, w + h) - phi_at(at, w - h)) / Complex(2 * h, 0.0);
  EXPECT_LT(max_abs(delta(at, w, w, true) + dphi), 1e-6);
  EXPECT_LT(max_abs(delta(at, w + 1e-7, w) - delta(at, w, w, true)), 1e-5);
  EXPECT_THROW(delta(at, as_complex(at.points[0]), w), std::domain_error);
}

TEST(Observables, PhiFromFirstArrows) {
  std::mt19937_64 rng(26);
  const auto q = small_quivers()[0];
  const CStarRep at = random_rep(q, rng);
  const Complex z(0.37, 0.0);
  CMatrix want(2, 2);
  for (std::size_t m = 0; m < q.num_arms(); ++m)
    want += at.g_at(m, 1) * at.f_at(m, 1) / (z - Complex(at.points[m].get_d(), 0.0));
  EXPECT_LT(max_abs(phi_at(at, z) - want), 1e-12);
  EXPECT_LT(std::abs(invariant_value(at, 2, z) - (want * want).trace()), 1e-12);
}

TEST(Observables, InvariantsAreGroupInvariant) {
  std::mt19937_64 rng(27);
  for (const auto& q : small_quivers()) {
    const CStarRep at = random_rep(q, rng);
    const CStarRep moved = group_act(at, random_group_element(q, rng));
    const Complex z(0.41, 0.0);
    for (int t = 1; t <= q.rank + 1; ++t) {
      const Complex a = invariant_value(at, t, z), b = invariant_value(moved, t, z);
      EXPECT_LT(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(Observables, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(28);
  double worst = 0.0;
  for (const auto& q : small_quivers())
    for (int s = 0; s < 5; ++s) {
      const CStarRep at = random_rep(q, rng);
      const auto zw = spectral_pair(rng, at.points);
      const Complex z = as_complex(zw[0]);
      const std::vector<Observable> obs{
          invariant_observable(1, z), invariant_observable(3, z), entry_observable(1, 0, z),
          random_quadratic(q, rng).observable(), product(invariant_observable(2, z), entry_observable(0, 0, z))};
      for (const auto& o : obs) worst = std::max(worst, gradient_fd_error(o, at));
    }
  EXPECT_LT(worst, 1e-6);
}

TEST(Observables, CheckedObservableRejectsWrongGradient) {
  std::mt19937_64 rng(29);
  const auto q = small_quivers()[0];
  const CStarRep at = random_rep(q, rng);
  const Observable good = invariant_observable(2, Complex(0.3, 0.0));
  EXPECT_NO_THROW(checked_observable(good, at));
  Observable bad = good;
  bad.grad = [good](const CStarRep& x) { return scaled(good.grad(x), 2.0); };
  EXPECT_THROW(checked_observable(bad, at), GradientSelfTestFailure);
  EXPECT_THROW(entry_observable(2, 0, Complex(0.3, 0.0)).grad(at), std::out_of_range);
}

TEST(Flow, HamiltonianFieldIsTangentAndConservesInvariants) {
  std::mt19937_64 rng(30);
  const auto q = small_quivers()[1];
  // entries of size ~0.25 keep the degree-8 drift of I_4 small
  const CStarRep at = scaled(random_rep(q, rng), 0.5);
  const Complex z(0.43, 0.0), w(-0.61, 0.0);
  const Observable f = invariant_observable(2, z);
  const CStarRep x = hamiltonian_vector_field(f, at);
  // directional derivative of G along X_F is {F, G}
  const Observable g = entry_observable(0, 2, w);
  const Complex dir = flatten(g.grad(at)).cwiseProduct(flatten(x)).sum();
  EXPECT_LT(std::abs(dir - bracket(f, g, at)), 1e-12);
  // the moment map is first-order constant along the flow
  const Eigen::VectorXcd dmu = moment_jacobian(at) * flatten(x);
  EXPECT_LT(dmu.cwiseAbs().maxCoeff(), 1e-6);
  const Observable i4 = invariant_observable(4, w);
  auto drift = [&](double h) {
    const CStarRep y = euler_step(at, x, h);
    const auto m0 = moment_map(at), m1 = moment_map(y);
    return std::pair{std::abs(i4(y) - i4(at)), max_abs(m1.center - m0.center)};
  };
  const auto [i_big, m_big] = drift(1e-3);
  const auto [i_small, m_small] = drift(5e-4);
  EXPECT_GT(i_big / i_small, 3.0);
  EXPECT_LT(i_big / i_small, 5.0);
  EXPECT_GT(m_big / m_small, 3.0);
  EXPECT_LT(m_big / m_small, 5.0);
}

TEST(CountCheck, RankTwoFullFlagHasOneIndependentHamiltonian) {
  const auto t = type_with(2, {{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  DSInstance inst;
  inst.rank = 2;
  inst.classes.assign(4, NilpotentClass::from_partition({2}));
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    DSConfig cfg;
    cfg.seed = seed;
    const auto res = solve(inst, cfg);
    ASSERT_TRUE(res.success);
    const CStarRep at = solution_to_rep(res.solution->matrices, inst);
    const auto cc = hamiltonian_count(at, t, rng);
    EXPECT_LT(cc.moment_residual, 1e-8);
    EXPECT_EQ(cc.expected, 1);
    EXPECT_EQ(cc.rank, 1u);
  }
}

TEST(CountCheck, SpectralParametersNeverRunOut) {
  std::mt19937_64 rng(32);
  const auto pts = MarkedLine::standard(5).points;
  std::vector<Rational> zs;
  for (int k = 0; k < 80; ++k) zs.push_back(sample_spectral_parameter(rng, pts, zs));
  const Rational quarter(1, 4);
  for (std::size_t a = 0; a < zs.size(); ++a) {
    for (const auto& x : pts) EXPECT_GE(abs(zs[a] - x), quarter);
    for (std::size_t b = 0; b < a; ++b) EXPECT_GE(abs(zs[a] - zs[b]), quarter);
  }
}

TEST(CountCheck, TypeOfQuiverRecoversMultiplicities) {
  const auto t = type_with(3, {{1, 1, 1}, {2, 1}, {1, 2}, {1, 1, 1}});
  const auto back = type_of_quiver(build_star_quiver(t), t.line.points);
  EXPECT_EQ(back.multiplicities, t.multiplicities);
  EXPECT_EQ(hitchin_base_degrees(back).dimension, hitchin_base_degrees(t).dimension);
}

TEST(PoissonCheck, ReportOnSolverRep) {
  DSInstance inst;
  inst.rank = 3;
  inst.classes.assign(4, NilpotentClass::from_partition({3}));
  const auto res = solve(inst);
  ASSERT_TRUE(res.success);
  PoissonOptions opt;
  opt.grid = 20;
  const auto rep = poisson_check(solution_to_rep(res.solution->matrices, inst), opt);
  EXPECT_LT(rep.entry_bracket_max, 1e-9);
  EXPECT_LT(rep.commutativity_max, 1e-8);
  EXPECT_LT(rep.jacobi_max, 1e-9);
  EXPECT_LT(rep.gradient_rel_max, 1e-6);
  EXPECT_LT(rep.delta_identity_max, 1e-10);
  ASSERT_TRUE(rep.count.has_value());
  EXPECT_EQ(static_cast<long>(rep.count->rank), rep.count->expected);
}
