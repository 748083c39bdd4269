#include "fairmatch/tpms.hpp"

#include "fairmatch/oracle.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace {

using namespace fairmatch;

TEST(ScaledCost, RoundsAndNegates) {
  EXPECT_EQ(scaled_cost(0.9, 100000), -90000);
  EXPECT_EQ(scaled_cost(-0.123456, 100000), 12346);
  EXPECT_EQ(scaled_cost(0.0, 100000), 0);
  EXPECT_THROW(scaled_cost(1e12, 100000), Error);
}

TEST(AssignmentNetwork, TwoTierShape) {
  AssignmentLayout layout;
  auto net = build_assignment_network(fixtures::two_tier(), {}, &layout);
  EXPECT_EQ(net.num_nodes(), 10);
  EXPECT_EQ(net.num_arcs(), 4 + 16 + 4);
  EXPECT_EQ(net.supply(layout.source), 8);
  EXPECT_EQ(net.supply(layout.sink), -8);
  EXPECT_EQ(layout.sink, 9);
  for (const auto& a : net.arcs()) {
    if (layout.is_reviewer(a.from) && layout.is_paper(a.to)) {
      EXPECT_EQ(a.capacity, 1);
      const Index i = a.from - layout.reviewer_base;
      EXPECT_EQ(a.cost, i < 2 ? -90000 : -10000);
    }
  }
}

TEST(Tpms, TwoTierObjective) {
  Instance inst = fixtures::two_tier();
  Matching m = solve_tpms(inst);
  EXPECT_DOUBLE_EQ(objective(inst, m), 4.0);
  EXPECT_TRUE(validate(inst, m).empty());
}

TEST(Tpms, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Instance inst = fixtures::random_instance(seed);
    Matching m = solve_tpms(inst);
    ASSERT_TRUE(validate(inst, m).empty()) << "seed " << seed;
    const double tol = inst.coverage().sum() * inst.a_max() / 1e5;
    EXPECT_NEAR(objective(inst, m), oracle::brute_force_optimal(inst).value, tol)
        << "seed " << seed;
  }
}

TEST(Tpms, NegativeAffinitiesStillCoverEveryPaper) {
  fixtures::TinySpec spec;
  spec.lo = -1.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Instance inst = fixtures::random_instance(seed, spec);
    Matching m = solve_tpms(inst);
    ASSERT_TRUE(validate(inst.without_load_lb(), m).empty());
    EXPECT_NEAR(objective(inst, m), oracle::brute_force_optimal(inst).value,
                inst.coverage().sum() * 1.0 / 1e5);
  }
}

TEST(Tpms, RejectsInfeasibleInstance) {
  Instance inst(Matrix::Zero(2, 3), Counts::Ones(2), Counts::Ones(3));
  EXPECT_THROW(solve_tpms(inst), Error);
}

TEST(TpmsLowerBounds, TwoTierIsValid) {
  Instance inst = fixtures::two_tier();
  Matching m = solve_tpms_with_lb(inst);
  EXPECT_TRUE(validate(inst, m).empty());
  EXPECT_DOUBLE_EQ(objective(inst, m), 4.0);
}

TEST(TpmsLowerBounds, ValidAndNearOptimalOnSeededInstances) {
  // Papers with one review each keep the oracle search space small.
  int optimal = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Instance base = fixtures::shaped_instance(seed, 6, 8, 1, 3, 1);
    Matching m = solve_assignment(base);
    ASSERT_TRUE(validate(base, m).empty()) << "seed " << seed;
    const double best = oracle::brute_force_optimal(base).value;
    EXPECT_LE(objective(base, m), best + 1e-9);
    if (objective(base, m) >= best - 8 * base.a_max() / 1e5) ++optimal;
  }
  RecordProperty("optimal_runs", optimal);
}

TEST(TpmsLowerBounds, DispatchIgnoresMissingBounds) {
  Instance inst = fixtures::two_tier(false);
  EXPECT_EQ(solve_assignment(inst), solve_tpms(inst));
}

TEST(TpmsLowerBounds, BoundsForceSpread) {
  // One reviewer is best everywhere; L = 1 forces every reviewer in.
  Matrix a(3, 3);
  a << 1.0, 1.0, 1.0,
       0.1, 0.2, 0.3,
       0.3, 0.2, 0.1;
  Instance inst(a, Counts::Constant(3, 3), Counts::Ones(3), Counts::Ones(3));
  Matching m = solve_tpms_with_lb(inst);
  EXPECT_EQ(m.loads(), Counts::Ones(3));
  EXPECT_NEAR(objective(inst, m), oracle::brute_force_optimal(inst).value, 1e-9);
}

TEST(AssignmentNetwork, BlockedPairsGetNoArc) {
  Instance inst = fixtures::two_tier(false);
  Matching blocked = fixtures::two_tier_fair();
  AssignmentLayout layout;
  auto net = build_assignment_network(inst, {}, Counts::Constant(4, 1), Counts::Constant(4, 1),
                                      &blocked, &layout);
  for (const auto& a : net.arcs()) {
    if (layout.is_reviewer(a.from) && layout.is_paper(a.to)) {
      EXPECT_FALSE(blocked.assigned(a.from - layout.reviewer_base, a.to - layout.paper_base));
    }
  }
}

}  // namespace
