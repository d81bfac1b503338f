#include "test_support.hpp"

using namespace hq;
using hq::testing::random_feasible_instance;

namespace {

DSInstance uniform_instance(int r, int n, std::vector<int> partition) {
  DSInstance inst;
  inst.rank = r;
  for (int i = 0; i < n; ++i) inst.classes.push_back(NilpotentClass::from_partition(partition));
  return inst;
}

CMatrix random_orthogonal(std::size_t r, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  for (Eigen::Index a = 0; a < g.rows(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b) g(a, b) = nd(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  CMatrix out(r, r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) out(a, b) = Complex(q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), 0.0);
  return out;
}

}  // namespace

TEST(JordanForm, BlocksFollowThePartition) {
  const auto c = NilpotentClass::from_partition({3, 1});
  const CMatrix j = jordan_form(c);
  EXPECT_EQ(j.rows(), 4u);
  EXPECT_EQ(rank_profile(std::vector<CMatrix>{j})[0], (std::vector<int>{2, 1, 0, 0}));
  EXPECT_EQ(j(0, 1), Complex(1, 0));
  EXPECT_EQ(j(2, 3), Complex(0, 0));
}

TEST(Solve, RankTwoFourPoints) {
  const auto inst = uniform_instance(2, 4, {2});
  const auto res = solve(inst);
  ASSERT_TRUE(res.success);
  const auto& sol = *res.solution;
  EXPECT_LT(sol.residual, 1e-10);
  EXPECT_LT(sol.restart, 20);
  EXPECT_TRUE(sol.irreducible);
  EXPECT_FALSE(sol.words.empty());
  EXPECT_TRUE(profile_matches(sol.ranks, inst.classes));
  for (const auto& a : sol.matrices) EXPECT_LT(max_abs(a * a), 1e-9);
  // the certificate words span gl_2
  EXPECT_EQ(verify(sol).words.size(), 4u);
}

TEST(Solve, ConjugatorsReproduceMatrices) {
  const auto inst = uniform_instance(3, 4, {3});
  const auto res = solve(inst);
  ASSERT_TRUE(res.success);
  const auto& sol = *res.solution;
  for (std::size_t i = 0; i + 1 < inst.size(); ++i) {
    const CMatrix& p = sol.conjugators[i];
    EXPECT_LT(max_abs(sol.matrices[i] * p - p * sol.representatives[i]), 1e-8);
  }
}

TEST(Solve, FrameIsTransparent) {
  std::mt19937_64 rng(11);
  const auto inst = uniform_instance(3, 4, {3});
  DSConfig plain;
  DSConfig framed;
  framed.frame = random_orthogonal(3, rng);
  const auto a = solve(inst, plain);
  const auto b = solve(inst, framed);
  ASSERT_TRUE(a.success);
  ASSERT_TRUE(b.success);
  EXPECT_EQ(a.solution->restart, b.solution->restart);
  for (std::size_t i = 0; i < inst.size(); ++i)
    EXPECT_LT(max_abs(a.solution->matrices[i] - b.solution->matrices[i]), 1e-6);
}

TEST(Solve, InfeasibleRankFiveFails) {
  const auto inst = uniform_instance(5, 4, {2, 1, 1, 1});
  DSConfig cfg;
  cfg.restarts = 5;
  const auto res = solve(inst, cfg);
  EXPECT_FALSE(res.feasibility.feasible);
  EXPECT_EQ(res.feasibility.lhs, 10);
  EXPECT_EQ(res.feasibility.rhs, 4);
  EXPECT_FALSE(res.success);
  EXPECT_EQ(res.restarts.size(), 5u);
}

TEST(Solve, TwiceImaginaryRootHasNoIrreducibleSolution) {
  // r = 4, four classes [2,2]: dimension vector 2 delta of the affine D4 star,
  // where every solution decomposes; no restart can certify irreducibility
  const auto inst = uniform_instance(4, 4, {2, 2});
  DSConfig cfg;
  cfg.restarts = 6;
  const auto res = solve(inst, cfg);
  EXPECT_TRUE(res.feasibility.feasible);
  EXPECT_FALSE(res.success);
  for (const auto& rec : res.restarts) EXPECT_NE(rec.status, "converged");
}

TEST(Solve, ZeroClassesGiveTheTrivialTuple) {
  const auto inst = uniform_instance(2, 3, {1, 1});
  const auto res = solve(inst);
  ASSERT_TRUE(res.success);
  EXPECT_EQ(res.restarts.front().status, "trivial");
  EXPECT_FALSE(res.solution->irreducible);
  for (const auto& a : res.solution->matrices) EXPECT_EQ(max_abs(a), 0.0);
}

TEST(Solve, DeterministicForFixedSeed) {
  const auto inst = uniform_instance(3, 5, {3});
  const auto a = solve(inst), b = solve(inst);
  ASSERT_TRUE(a.success);
  for (std::size_t i = 0; i < inst.size(); ++i) EXPECT_EQ(max_abs(a.solution->matrices[i] - b.solution->matrices[i]), 0.0);
  EXPECT_EQ(a.restarts.size(), b.restarts.size());
}

TEST(Solve, RejectsMalformedInstances) {
  DSInstance inst = uniform_instance(2, 4, {2});
  inst.classes[1] = NilpotentClass::from_partition({2, 1});
  EXPECT_THROW(solve(inst), std::invalid_argument);
  inst = uniform_instance(2, 4, {2});
  inst.points = {Rational(0), Rational(1), Rational(1), Rational(2)};
  EXPECT_THROW(solve(inst), std::invalid_argument);
}

TEST(Verify, UpperTriangularTupleIsReducible) {
  const CMatrix e12 = to_complex(QMatrix{{0, 1}, {0, 0}});
  const std::vector<CMatrix> as{e12, e12 * Complex(-1, 0), e12 * Complex(2, 0), e12 * Complex(-2, 0)};
  const auto rep = verify(as, uniform_instance(2, 4, {2}));
  EXPECT_TRUE(rep.residual_ok);
  EXPECT_TRUE(rep.profile_ok);
  EXPECT_FALSE(rep.irreducible);
  ASSERT_TRUE(rep.witness.has_value());
  // the witness is the common invariant line spanned by e_1
  EXPECT_EQ(rep.witness->cols(), 1u);
  EXPECT_LT(std::abs((*rep.witness)(1, 0)), 1e-9);
  EXPECT_FALSE(rep.ok());
}

TEST(Verify, WrongShapesThrow) {
  const auto inst = uniform_instance(2, 4, {2});
  EXPECT_THROW(verify(std::vector<CMatrix>(3, CMatrix(2, 2)), inst), std::invalid_argument);
  EXPECT_THROW(verify(std::vector<CMatrix>(4, CMatrix(3, 3)), inst), std::invalid_argument);
}

TEST(Verify, HitchinCrossCheckOnRandomInstances) {
  std::mt19937_64 rng(12);
  int certified = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const auto inst = random_feasible_instance(rng, 2, 4, 4, 5);
    DSConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial + 1);
    const auto res = solve(inst, cfg);
    if (!res.success) continue;
    ++certified;
    const auto rep = verify(*res.solution, VerifyTol{}, true);
    EXPECT_TRUE(rep.residual_ok);
    EXPECT_TRUE(rep.profile_ok);
    EXPECT_TRUE(rep.irreducible);
    ASSERT_TRUE(rep.hitchin.has_value());
    EXPECT_TRUE(rep.hitchin->rationalized) << rep.hitchin->note;
    EXPECT_TRUE(rep.hitchin->member);
    EXPECT_TRUE(rep.hitchin->exact_orders);
  }
  EXPECT_GE(certified, 6);
}

TEST(Flags, FromSolutionSatisfyStrongPreservation) {
  const auto inst = uniform_instance(3, 4, {3});
  const auto res = solve(inst);
  ASSERT_TRUE(res.success);
  const ParabolicType t = type_from_classes(inst.classes, inst.line());
  const auto fr = flags_from_solution(res.solution->matrices, t);
  EXPECT_FALSE(fr.completion_used);
  EXPECT_TRUE(check_invariants(fr.tuple, BridgeTol{1e-7, NumericTol{1e-8, 1e-300}}).strong_preservation);
  // a type whose flags the residues cannot preserve
  ParabolicType bad = type_from_classes(std::vector<NilpotentClass>(4, NilpotentClass::from_partition({1, 1, 1})),
                                        inst.line());
  EXPECT_THROW(flags_from_solution(res.solution->matrices, bad), std::invalid_argument);
}
