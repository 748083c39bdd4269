#include "fairmatch/oracle.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <set>

namespace {

using namespace fairmatch;

std::vector<int> canonical(const Matching& m) {
  std::vector<int> out;
  for (Index i = 0; i < m.num_reviewers(); ++i)
    for (Index j = 0; j < m.num_papers(); ++j) out.push_back(m.assigned(i, j));
  return out;
}

long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(Enumerate, TwoTierContainsBothMatchings) {
  auto all = oracle::enumerate_matchings(fixtures::two_tier());
  bool fair = false, unfair = false;
  for (const Matching& m : all) {
    fair |= m == fixtures::two_tier_fair();
    unfair |= m == fixtures::two_tier_unfair();
  }
  EXPECT_TRUE(fair);
  EXPECT_TRUE(unfair);
  // 2-regular bipartite graphs on 4+4 vertices.
  EXPECT_EQ(all.size(), 90u);
}

TEST(Enumerate, SingleCell) {
  Instance inst(Matrix::Constant(1, 1, 0.3), Counts::Ones(1), Counts::Ones(1));
  EXPECT_EQ(oracle::enumerate_matchings(inst).size(), 1u);
}

TEST(Enumerate, UnitLoadsCount) {
  // Paper 0 picks 2 of 4 reviewers, paper 1 takes the remaining 2.
  Instance inst(Matrix::Zero(4, 2), Counts::Ones(4), Counts::Constant(2, 2));
  EXPECT_EQ(oracle::enumerate_matchings(inst).size(),
            static_cast<size_t>(binom(4, 2) * binom(2, 2)));
}

TEST(Enumerate, UnboundedLoadsGiveProductOfBinomials) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance base = fixtures::random_instance(seed);
    Instance inst(base.affinity(), Counts::Constant(base.num_reviewers(), 100),
                  base.coverage());
    long long expected = 1;
    for (Index j = 0; j < inst.num_papers(); ++j)
      expected *= binom(inst.num_reviewers(), inst.coverage()(j));
    EXPECT_EQ(static_cast<long long>(oracle::enumerate_matchings(inst).size()), expected);
  }
}

TEST(Enumerate, DuplicateFreeAndValid) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    fixtures::TinySpec spec;
    spec.lower_bounds = seed % 2 == 0;
    Instance inst = fixtures::random_instance(seed, spec);
    std::set<std::vector<int>> seen;
    oracle::for_each_matching(inst, [&](const Matching& m) {
      EXPECT_TRUE(validate(inst, m).empty());
      EXPECT_TRUE(seen.insert(canonical(m)).second);
    });
  }
}

TEST(Enumerate, RejectsLargeSearchSpace) {
  Instance inst(Matrix::Zero(20, 10), Counts::Constant(20, 10), Counts::Constant(10, 3));
  EXPECT_GT(oracle::search_space_size(inst), oracle::kMaxSearchSpace);
  EXPECT_THROW(oracle::for_each_matching(inst, [](const Matching&) {}), Error);
}

TEST(BruteForce, TwoTierValues) {
  EXPECT_NEAR(oracle::brute_force_optimal(fixtures::two_tier()).value, 4.0, 1e-12);
  oracle::Best mm = oracle::brute_force_maximin(fixtures::two_tier());
  EXPECT_NEAR(mm.value, 1.0, 1e-12);
  EXPECT_GE(mm.value, 0.2);
}

TEST(BruteForce, SingleMatchingInstance) {
  Instance inst(Matrix::Constant(1, 1, 0.3), Counts::Ones(1), Counts::Ones(1));
  oracle::Best b = oracle::brute_force_optimal(inst);
  EXPECT_DOUBLE_EQ(b.value, 0.3);
  EXPECT_TRUE(b.matching.assigned(0, 0));
}

TEST(BruteForce, OnePaperMaximinIsTopSum) {
  Matrix a(5, 1);
  a << 0.3, 0.9, 0.1, 0.7, 0.5;
  Instance inst(a, Counts::Ones(5), Counts::Constant(1, 3));
  EXPECT_NEAR(oracle::brute_force_maximin(inst).value, 0.9 + 0.7 + 0.5, 1e-12);
}

TEST(BruteForce, OptimumDominatesEveryMatching) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = fixtures::random_instance(seed);
    const double best = oracle::brute_force_optimal(inst).value;
    oracle::for_each_matching(inst, [&](const Matching& m) {
      EXPECT_LE(objective(inst, m), best + 1e-12);
    });
  }
}

TEST(BruteForce, FairOptimumRespectsThreshold) {
  auto fair = oracle::brute_force_optimal_fair(fixtures::two_tier(), 1.0);
  ASSERT_TRUE(fair);
  EXPECT_NEAR(fair->value, 4.0, 1e-12);
  EXPECT_NEAR(paper_scores(fixtures::two_tier(), fair->matching).minCoeff(), 1.0, 1e-12);
  EXPECT_FALSE(oracle::brute_force_optimal_fair(fixtures::two_tier(), 1.01));
}

}  // namespace
