#include "test_support.hpp"

using namespace hq;
using hq::testing::random_group_element;
using hq::testing::random_invertible;

namespace {

ParabolicType full_flag_type(int r, std::size_t n, long K) {
  ParabolicType t;
  t.rank = r;
  t.K = K;
  t.line = MarkedLine::standard(n);
  std::vector<long> a(static_cast<std::size_t>(r));
  std::iota(a.begin(), a.end(), 0L);
  t.multiplicities.assign(n, std::vector<int>(static_cast<std::size_t>(r), 1));
  t.weights.assign(n, a);
  return t;
}

// r = 2, four arms of chain (1): A_1 = E12, A_2 = -E12, A_3 = E21, A_4 = -E21
// factored as g f with f a row and g a column.
QStarRep r2_rep() {
  StarQuiver q{2, {{1}, {1}, {1}, {1}}};
  QStarRep rep = QStarRep::zero(q);
  rep.g_at(0, 1) = QMatrix{{1}, {0}};
  rep.f_at(0, 1) = QMatrix{{0, 1}};
  rep.g_at(1, 1) = QMatrix{{1}, {0}};
  rep.f_at(1, 1) = QMatrix{{0, -1}};
  rep.g_at(2, 1) = QMatrix{{0}, {1}};
  rep.f_at(2, 1) = QMatrix{{1, 0}};
  rep.g_at(3, 1) = QMatrix{{0}, {1}};
  rep.f_at(3, 1) = QMatrix{{-1, 0}};
  return rep;
}

double moment_distance(const MomentValue<Complex>& a, const MomentValue<Complex>& b) {
  double d = max_abs(a.center - b.center);
  for (std::size_t j = 0; j < a.arms.size(); ++j)
    for (std::size_t i = 0; i < a.arms[j].size(); ++i) d = std::max(d, max_abs(a.arms[j][i] - b.arms[j][i]));
  return d;
}

}  // namespace

TEST(StarQuiver, BuildFromType) {
  const auto q = build_star_quiver(full_flag_type(2, 4, 16));
  EXPECT_EQ(q.rank, 2);
  EXPECT_EQ(q.arms, (std::vector<std::vector<int>>(4, std::vector<int>{1})));

  ParabolicType t = full_flag_type(3, 4, 40);
  t.multiplicities[1] = {3};
  t.weights[1] = {0};
  const auto q3 = build_star_quiver(t);
  EXPECT_EQ(q3.length(1), 0);
  EXPECT_EQ(q3.arms[0], (std::vector<int>{2, 1}));
  EXPECT_EQ(q3.dim(0, 0), 3);
  EXPECT_EQ(q3.dim(0, 2), 1);
}

TEST(StabilityCharacter, Examples) {
  ParabolicType t = full_flag_type(2, 4, 16);
  t.weights.assign(4, {0, 3});
  const auto c = build_character(t);
  EXPECT_EQ(c.central, -6);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(c.exponent(j, 1), 3);
  EXPECT_EQ(c.multiplier, 1);

  ParabolicType flat;
  flat.rank = 2;
  flat.K = 1;
  flat.line = MarkedLine::standard(4);
  flat.multiplicities.assign(4, {2});
  flat.weights.assign(4, {0});
  EXPECT_EQ(build_character(flat).central, 0);

  ParabolicType odd;
  odd.rank = 3;
  odd.K = 10;
  odd.line = MarkedLine::standard(4);
  odd.multiplicities = {{2, 1}, {3}, {3}, {3}};
  odd.weights = {{0, 1}, {0}, {0}, {0}};
  const auto co = build_character(odd);
  EXPECT_EQ(co.multiplier, 3);
  EXPECT_EQ(co.central, -1);
  EXPECT_EQ(co.exponent(0, 1), 3);
}

TEST(StabilityCharacter, KillsTheDiagonalOnRandomTypes) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = hq::testing::random_type(rng);
    const auto q = build_star_quiver(t);
    const auto c = build_character(t);
    // chi(t * identity) = t^{r * central + sum dims * exponents}
    long total = static_cast<long>(q.rank) * c.central;
    for (std::size_t j = 0; j < q.num_arms(); ++j)
      for (int i = 1; i <= q.length(j); ++i) total += q.dim(j, i) * c.exponent(j, i);
    EXPECT_EQ(total, 0);
    EXPECT_GE(c.multiplier, 1);
  }
}

TEST(MomentMap, ZeroAndFourArmExample) {
  StarQuiver q{3, {{2, 1}, {1}, {}, {2}}};
  EXPECT_EQ(moment_map(QStarRep::zero(q)).max_abs(), 0.0);
  const auto mu = moment_map(r2_rep());
  EXPECT_TRUE(is_zero(mu.center));
  for (const auto& arm : mu.arms)
    for (const auto& m : arm) EXPECT_TRUE(is_zero(m));
}

TEST(MomentMap, PerturbationIsLinear) {
  const CStarRep base = to_complex(r2_rep());
  std::vector<double> norms;
  for (double d : {1e-3, 2e-3, 4e-3}) {
    CStarRep p = base;
    p.g_at(0, 1)(1, 0) += d;
    norms.push_back(frobenius_norm(moment_map(p).center));
  }
  EXPECT_NEAR(norms[1] / norms[0], 2.0, 1e-9);
  EXPECT_NEAR(norms[2] / norms[0], 4.0, 1e-9);
}

TEST(MomentMap, ArmComponentsFollowTheVertexMatchedReading) {
  std::mt19937_64 rng(8);
  StarQuiver q{3, {{2, 1}}};
  const CStarRep rep = random_rep(q, rng);
  const auto mu = moment_map(rep);
  const CMatrix c = rep.g_at(0, 1) * rep.f_at(0, 1);
  const CMatrix a1 = rep.f_at(0, 1) * rep.g_at(0, 1) - rep.g_at(0, 2) * rep.f_at(0, 2);
  const CMatrix a2 = rep.f_at(0, 2) * rep.g_at(0, 2);
  EXPECT_LT(max_abs(mu.center - c), 1e-14);
  EXPECT_LT(max_abs(mu.arms[0][0] - a1), 1e-14);
  EXPECT_LT(max_abs(mu.arms[0][1] - a2), 1e-14);
}

TEST(MomentMap, EquivariantUnderGroupAction) {
  std::mt19937_64 rng(12);
  StarQuiver q{3, {{2, 1}, {1}, {2}, {1}}};
  for (int trial = 0; trial < 20; ++trial) {
    const CStarRep rep = random_rep(q, rng);
    const auto h = random_group_element(q, rng);
    const auto lhs = moment_map(group_act(rep, h));
    const auto rhs = conjugate_moment(moment_map(rep), h);
    EXPECT_LT(moment_distance(lhs, rhs), 1e-10);
  }
}

TEST(ArmSemistable, Examples) {
  StarQuiver q{3, {{2, 1}}};
  QStarRep incl = QStarRep::zero(q, {Rational(0)});
  incl.g_at(0, 1) = QMatrix{{1, 0}, {0, 1}, {0, 0}};
  incl.g_at(0, 2) = QMatrix{{1}, {0}};
  EXPECT_TRUE(arm_semistable(incl, 0));
  QStarRep broken = incl;
  broken.g_at(0, 2) = QMatrix{{0}, {0}};
  EXPECT_FALSE(arm_semistable(broken, 0));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) EXPECT_TRUE(arm_semistable(random_rep(q, rng, 1.0, {Rational(0)}), 0));
}

TEST(DestabilizingOneParam, ZeroColumnAtLastVertex) {
  ParabolicType t;
  t.rank = 3;
  t.K = 20;
  t.line = MarkedLine::standard(1);
  t.multiplicities = {{1, 1, 1}};
  t.weights = {{0, 2, 5}};
  const auto chi = build_character(t);
  const auto q = build_star_quiver(t);
  QStarRep rep = QStarRep::zero(q, {Rational(0)});
  rep.g_at(0, 1) = QMatrix{{1, 0}, {0, 1}, {0, 0}};
  rep.g_at(0, 2) = QMatrix{{1}, {0}};
  EXPECT_FALSE(destabilizing_one_ps(rep, 0, chi).has_value());

  rep.g_at(0, 2) = QMatrix{{0}, {0}};
  const auto ps = destabilizing_one_ps(rep, 0, chi);
  ASSERT_TRUE(ps.has_value());
  EXPECT_EQ(ps->level, 2);
  EXPECT_EQ(ps->exponents, std::vector<int>{-1});
  EXPECT_LT(ps->pairing, 0);
}

TEST(DestabilizingOneParam, MiddleLevelLimitExists) {
  ParabolicType t;
  t.rank = 3;
  t.K = 20;
  t.line = MarkedLine::standard(1);
  t.multiplicities = {{1, 1, 1}};
  t.weights = {{0, 2, 5}};
  const auto chi = build_character(t);
  const auto q = build_star_quiver(t);
  QStarRep rep = QStarRep::zero(q, {Rational(0)});
  rep.g_at(0, 1) = QMatrix{{1, 2}, {2, 4}, {3, 6}};  // rank 1 on a 2-dimensional level
  rep.g_at(0, 2) = QMatrix{{1}, {1}};
  const auto ps = destabilizing_one_ps(rep, 0, chi);
  ASSERT_TRUE(ps.has_value());
  EXPECT_EQ(ps->level, 1);
  EXPECT_LT(ps->pairing, 0);
  // the replayed family converges as t -> 0: successive values approach a limit
  Rational prev_gap;
  std::optional<QStarRep> prev;
  for (long k : {10L, 100L, 1000L, 10000L}) {
    const auto cur = replay_one_ps(rep, *ps, Rational(1, k));
    EXPECT_TRUE(is_zero(cur.g_at(0, 1) - rep.g_at(0, 1)));
    if (prev) {
      const QMatrix d = cur.g_at(0, 2) - prev->g_at(0, 2);
      Rational gap = 0;
      for (const auto& v : d.data()) gap = std::max(gap, Rational(abs(v)));
      if (k > 100) {
        EXPECT_LT(gap, prev_gap);
      }
      prev_gap = gap;
    }
    prev = cur;
  }
}

TEST(TraceAlongCycle, Examples) {
  const QStarRep rep = r2_rep();
  const QuiverVertex center{0, 0};
  EXPECT_EQ(trace_along_cycle(rep, center, {}), Rational(2));
  const std::vector<WalkStep> out_back{{0, 1, true}, {0, 1, false}};
  EXPECT_EQ(trace_along_cycle(rep, center, out_back), (rep.g_at(0, 1) * rep.f_at(0, 1)).trace());
  const std::vector<WalkStep> two_arms{{1, 1, true}, {1, 1, false}, {0, 1, true}, {0, 1, false}};
  const QMatrix a1 = rep.g_at(0, 1) * rep.f_at(0, 1);
  const QMatrix a2 = rep.g_at(1, 1) * rep.f_at(1, 1);
  EXPECT_EQ(trace_along_cycle(rep, center, two_arms), (a1 * a2).trace());
  EXPECT_THROW(trace_along_cycle(rep, center, std::vector<WalkStep>{{0, 1, true}}), std::invalid_argument);
}

TEST(GroupAct, IdentityAndScalarsActTrivially) {
  std::mt19937_64 rng(21);
  StarQuiver q{3, {{2, 1}, {1}, {2}, {1}}};
  const CStarRep rep = random_rep(q, rng);
  const CStarRep same = group_act(rep, GroupElement<Complex>::identity(q));
  auto scalar = GroupElement<Complex>::identity(q);
  const Complex s(1.7, -0.4);
  scalar.center *= s;
  for (auto& arm : scalar.arms)
    for (auto& m : arm) m *= s;
  const CStarRep scaled = group_act(rep, scalar);
  for (std::size_t j = 0; j < q.num_arms(); ++j)
    for (int i = 1; i <= q.length(j); ++i) {
      EXPECT_LT(max_abs(same.f_at(j, i) - rep.f_at(j, i)), 1e-15);
      EXPECT_LT(max_abs(scaled.f_at(j, i) - rep.f_at(j, i)), 1e-13);
      EXPECT_LT(max_abs(scaled.g_at(j, i) - rep.g_at(j, i)), 1e-13);
    }
  auto singular = GroupElement<Complex>::identity(q);
  singular.center = CMatrix(3, 3);
  EXPECT_THROW(group_act(rep, singular), std::invalid_argument);
}

TEST(GroupAct, CycleTracesAndArmSemistabilityAreInvariant) {
  std::mt19937_64 rng(31);
  StarQuiver q{3, {{2, 1}, {1}, {2}}};
  std::vector<std::vector<WalkStep>> walks = closed_walks(q, {0, 0}, 6);
  ASSERT_FALSE(walks.empty());
  for (int trial = 0; trial < 10; ++trial) {
    CStarRep rep = random_rep(q, rng);
    if (trial % 2) rep.g_at(0, 2) = CMatrix(2, 1);  // not arm-semistable
    const auto h = random_group_element(q, rng);
    const CStarRep moved = group_act(rep, h);
    for (const auto& w : walks) {
      const Complex a = trace_along_cycle(rep, {0, 0}, w);
      const Complex b = trace_along_cycle(moved, {0, 0}, w);
      EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a)));
    }
    for (std::size_t j = 0; j < q.num_arms(); ++j) EXPECT_EQ(arm_semistable(rep, j), arm_semistable(moved, j));
  }
}

TEST(ClosedWalks, CountsOnASingleEdge) {
  // one arm of length 1: closed walks from the center alternate out/in
  StarQuiver q{2, {{1}}};
  EXPECT_EQ(closed_walks(q, {0, 0}, 6).size(), 3u);
  StarQuiver two{2, {{1}, {1}}};
  // words in {a, b} of length 1..3 (each letter is an out-and-back)
  EXPECT_EQ(closed_walks(two, {0, 0}, 6).size(), 2u + 4u + 8u);
}
