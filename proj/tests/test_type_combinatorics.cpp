#include "test_support.hpp"

using namespace hq;
using hq::testing::random_type;

namespace {

ParabolicType uniform_type(int r, std::size_t n, std::vector<int> mult, std::vector<long> w, long K) {
  ParabolicType t;
  t.rank = r;
  t.K = K;
  t.line = MarkedLine::standard(n);
  t.multiplicities.assign(n, mult);
  t.weights.assign(n, w);
  t.validate(true);
  return t;
}

// eps_j read off the Young diagram: sort multiplicities, column l has mu_l boxes;
// box j (counting column by column) lies in column eps_j.
std::vector<int> eps_by_boxes(const std::vector<int>& n, int r) {
  std::vector<int> cols;
  for (int l = 1; l <= r; ++l) {
    int h = 0;
    for (int v : n) h += v >= l;
    for (int k = 0; k < h; ++k) cols.push_back(l);
  }
  return cols;
}

}  // namespace

TEST(MarkedLine, Validation) {
  EXPECT_NO_THROW(MarkedLine::standard(4).validate());
  EXPECT_THROW(MarkedLine::standard(3).validate(), std::invalid_argument);
  EXPECT_NO_THROW(MarkedLine::standard(3).validate(true));
  MarkedLine dup{{Rational(0), Rational(1), Rational(1), Rational(2)}};
  EXPECT_THROW(dup.validate(), std::invalid_argument);
}

TEST(ParabolicType, RejectsBadWeightsAndMultiplicities) {
  EXPECT_THROW(uniform_type(2, 4, {1, 1}, {1, 1}, 4), std::invalid_argument);
  EXPECT_THROW(uniform_type(2, 4, {1, 1}, {0, 4}, 4), std::invalid_argument);
  EXPECT_THROW(uniform_type(3, 4, {1, 1}, {0, 1}, 4), std::invalid_argument);
  EXPECT_THROW(uniform_type(2, 4, {1, 1}, {-1, 1}, 4), std::invalid_argument);
}

TEST(SmallWeights, Examples) {
  EXPECT_FALSE(check_small_weights(uniform_type(2, 4, {1, 1}, {0, 1}, 2)));
  EXPECT_TRUE(check_small_weights(uniform_type(2, 4, {2}, {0}, 1)));
  EXPECT_TRUE(check_small_weights(uniform_type(2, 4, {1, 1}, {0, 1}, 16)));
  // boundary: r * sum top = K is not small
  EXPECT_FALSE(check_small_weights(uniform_type(2, 4, {1, 1}, {0, 1}, 8)));
  EXPECT_TRUE(check_small_weights(uniform_type(2, 4, {1, 1}, {0, 1}, 9)));
}

TEST(SmallWeights, MonotoneUnderLoweringTopWeight) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = random_type(rng);
    if (!check_small_weights(t)) continue;
    for (std::size_t x = 0; x < t.num_points(); ++x) {
      auto u = t;
      auto& a = u.weights[x];
      const long floor = a.size() > 1 ? a[a.size() - 2] + 1 : 0;
      if (a.back() > floor) {
        --a.back();
        EXPECT_TRUE(check_small_weights(u));
      }
    }
  }
}

TEST(FlagDimensionVector, Examples) {
  EXPECT_EQ(flag_dimension_vector(uniform_type(2, 4, {1, 1}, {0, 1}, 4), 0), std::vector<int>{1});
  EXPECT_TRUE(flag_dimension_vector(uniform_type(3, 4, {3}, {0}, 4), 0).empty());
  EXPECT_EQ(flag_dimension_vector(uniform_type(3, 4, {2, 1}, {0, 1}, 4), 2), std::vector<int>{1});
  EXPECT_EQ(flag_dimension_vector(uniform_type(3, 4, {2, 1}, {0, 1}, 4), Rational(3)), std::vector<int>{1});
  EXPECT_THROW(flag_dimension_vector(uniform_type(3, 4, {2, 1}, {0, 1}, 4), 7), std::invalid_argument);
  EXPECT_THROW(flag_dimension_vector(uniform_type(3, 4, {2, 1}, {0, 1}, 4), Rational(1, 2)), std::invalid_argument);
}

TEST(MuEps, Examples) {
  auto a = mu_eps({2, 1}, 3);
  EXPECT_EQ(a.mu, (std::vector<int>{2, 1, 0}));
  EXPECT_EQ(a.eps, (std::vector<int>{1, 1, 2}));
  auto full = mu_eps({1, 1, 1, 1}, 4);
  EXPECT_EQ(full.mu, (std::vector<int>{4, 0, 0, 0}));
  EXPECT_EQ(full.eps, (std::vector<int>{1, 1, 1, 1}));
  auto none = mu_eps({4}, 4);
  EXPECT_EQ(none.mu, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(none.eps, (std::vector<int>{1, 2, 3, 4}));
}

TEST(MuEps, IdentitiesOnRandomTypes) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = random_type(rng);
    const auto me = mu_eps(t);
    for (std::size_t x = 0; x < t.num_points(); ++x) {
      const auto& n = t.multiplicities[x];
      const auto& m = me[x];
      EXPECT_EQ(std::accumulate(m.mu.begin(), m.mu.end(), 0), t.rank);
      EXPECT_EQ(m.eps.back(), *std::max_element(n.begin(), n.end()));
      EXPECT_EQ(m.eps, eps_by_boxes(n, t.rank));
      for (int j = 1; j < t.rank; ++j) {
        EXPECT_LE(m.eps[j - 1], m.eps[j]);
        EXPECT_LE(j - m.eps[j - 1], j + 1 - m.eps[j]);
      }
    }
  }
}

TEST(HitchinBaseDegrees, Examples) {
  const auto r1 = hitchin_base_degrees(uniform_type(1, 4, {1}, {0}, 2));
  EXPECT_EQ(r1.deg, std::vector<long>{-2});
  EXPECT_EQ(r1.dimension, 0);
  const auto r2 = hitchin_base_degrees(uniform_type(2, 4, {1, 1}, {0, 1}, 16));
  EXPECT_EQ(r2.deg, (std::vector<long>{-2, 0}));
  EXPECT_EQ(r2.dimension, 1);
  const auto r25 = hitchin_base_degrees(uniform_type(2, 5, {1, 1}, {0, 1}, 16));
  EXPECT_EQ(r25.deg, (std::vector<long>{-2, 1}));
  EXPECT_EQ(r25.dimension, 2);
}

TEST(HitchinBaseDegrees, TopDegreeControlsAllNonnegativeSteps) {
  // j - eps_j is nondecreasing, so deg_j + 2j is nondecreasing; deg_r >= 0 gives
  // deg_j >= -2(r - j) and the dimension formula matches a direct sum.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = random_type(rng);
    const auto h = hitchin_base_degrees(t);
    const auto me = mu_eps(t);
    long dim = 0;
    for (int j = 1; j <= t.rank; ++j) {
      long d = -2L * j;
      for (const auto& m : me) d += j - m.eps[j - 1];
      EXPECT_EQ(h.deg[j - 1], d);
      dim += d >= 0 ? d + 1 : 0;
      if (j > 1) {
        EXPECT_GE(h.deg[j - 1] + 2L * j, h.deg[j - 2] + 2L * (j - 1));
      }
    }
    EXPECT_EQ(h.dimension, dim);
    EXPECT_EQ(integral_base_condition(t), h.deg.back() >= 0);
  }
}

TEST(NilpotentClass, PartitionRoundTrip) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const int r = 1 + trial % 9;
    const auto p = hq::testing::random_partition(r, rng);
    const auto c = NilpotentClass::from_partition(p);
    EXPECT_EQ(c.rank, r);
    EXPECT_EQ(c.partition(), p);
    const NilpotentClass again{c.rank, c.rank_sequence};
    EXPECT_NO_THROW(again.validate());
    EXPECT_EQ(NilpotentClass::from_partition(again.partition()), c);
    const auto conj = c.conjugate_partition();
    EXPECT_EQ(std::accumulate(conj.begin(), conj.end(), 0), r);
  }
}

TEST(NilpotentClass, RejectsInvalidSequences) {
  EXPECT_THROW((NilpotentClass{3, {3}}.validate()), std::invalid_argument);
  EXPECT_THROW((NilpotentClass{4, {3, 1}}.validate()), std::invalid_argument);  // differences 1, 2 increase
  EXPECT_THROW((NilpotentClass{4, {2, 2}}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((NilpotentClass{4, {2}}.validate()));
  EXPECT_EQ((NilpotentClass{4, {2}}.partition()), (std::vector<int>{2, 2}));
}

TEST(DsFeasible, Examples) {
  const std::vector<NilpotentClass> r2(4, NilpotentClass::from_partition({2}));
  const auto f = ds_feasible(r2, 2);
  EXPECT_TRUE(f.feasible);
  EXPECT_EQ(f.lhs, 4);
  EXPECT_EQ(f.rhs, 4);
  EXPECT_TRUE(f.n_at_least_4);
  EXPECT_FALSE(f.r_at_least_4);
  const std::vector<NilpotentClass> r5(4, NilpotentClass::from_partition({2, 1, 1, 1}));
  EXPECT_FALSE(ds_feasible(r5, 5).feasible);
  EXPECT_TRUE(ds_feasible(r5, 5).r_at_least_4);
  const std::vector<NilpotentClass> zero(4, NilpotentClass::zero(3));
  EXPECT_FALSE(ds_feasible(zero, 3).feasible);
  EXPECT_THROW(ds_feasible(r2, 3), std::invalid_argument);
}

TEST(Simpleness, Examples) {
  EXPECT_TRUE(simpleness_condition_chain(2, {1}));
  EXPECT_TRUE(simpleness_condition_chain(3, {2, 1}));
  EXPECT_FALSE(simpleness_condition_chain(3, {2, 0}));
  EXPECT_FALSE(simpleness_condition_chain(4, {3, 1}));  // 1 >= 2 fails
  EXPECT_TRUE(simpleness_condition(uniform_type(2, 4, {1, 1}, {0, 1}, 16)));
}

TEST(WeightsGeneric, Examples) {
  // r = 2 full flags, equal weights everywhere: a line taking the top weight at
  // two points and the bottom at two others has the full slope.
  EXPECT_FALSE(weights_generic(uniform_type(2, 4, {1, 1}, {0, 1}, 16)));
  ParabolicType t = uniform_type(2, 4, {1, 1}, {0, 1}, 97);
  t.weights = {{0, 1}, {0, 2}, {0, 4}, {0, 8}};
  t.validate();
  EXPECT_TRUE(weights_generic(t));
  EXPECT_TRUE(weights_generic(uniform_type(1, 4, {1}, {0}, 3)));
  EXPECT_THROW(weights_generic(uniform_type(3, 4, {1, 1, 1}, {0, 1, 2}, 40), {2, 0}), std::invalid_argument);
}

TEST(WeightsGeneric, AgreesWithBruteForceOnSmallTypes) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_type(rng, 3, 4);
    // brute force over every per-point count vector and degree
    bool generic = true;
    const int r = t.rank;
    std::vector<std::vector<std::vector<int>>> options(t.num_points());
    for (std::size_t x = 0; x < t.num_points(); ++x) {
      const auto& n = t.multiplicities[x];
      std::vector<int> c(n.size(), 0);
      auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n.size()) {
          options[x].push_back(c);
          return;
        }
        for (int k = 0; k <= n[i]; ++k) {
          c[i] = k;
          self(self, i + 1);
        }
      };
      rec(rec, 0);
    }
    const Rational full = parabolic_slope(t, 0, r, t.multiplicities);
    std::vector<std::vector<int>> pick(t.num_points());
    auto rec = [&](auto&& self, std::size_t x, int s) -> void {
      if (!generic) return;
      if (x == t.num_points()) {
        if (s < 1 || s >= r) return;
        for (long d = -r; d <= 0; ++d)
          if (parabolic_slope(t, d, s, pick) == full) generic = false;
        return;
      }
      for (const auto& c : options[x]) {
        const int cs = std::accumulate(c.begin(), c.end(), 0);
        if (x > 0 && cs != s) continue;
        pick[x] = c;
        self(self, x + 1, cs);
      }
    };
    rec(rec, 0, 0);
    EXPECT_EQ(weights_generic(t), generic);
  }
}

TEST(TypeFromClasses, MultiplicitiesAreConjugatePartitions) {
  std::vector<NilpotentClass> cls{NilpotentClass::from_partition({3, 1}), NilpotentClass::from_partition({2, 2}),
                                  NilpotentClass::from_partition({2, 1, 1}), NilpotentClass::from_partition({4})};
  const auto t = type_from_classes(cls, MarkedLine::standard(4));
  EXPECT_NO_THROW(t.validate());
  EXPECT_TRUE(check_small_weights(t));
  EXPECT_EQ(t.multiplicities[0], (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(t.multiplicities[1], (std::vector<int>{2, 2}));
  EXPECT_EQ(t.multiplicities[3], (std::vector<int>{1, 1, 1, 1}));
}
