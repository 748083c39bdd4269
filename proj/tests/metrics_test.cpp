#include "fairmatch/metrics.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace {

using namespace fairmatch;

TEST(Stats, TwoTierFair) {
  MatchingStats s = compute_stats(fixtures::two_tier(), fixtures::two_tier_fair(), 1.5);
  EXPECT_NEAR(s.objective, 4.0, 1e-12);
  EXPECT_NEAR(s.min_ps, 1.0, 1e-12);
  EXPECT_NEAR(s.max_ps, 1.0, 1e-12);
  EXPECT_NEAR(s.mean_ps, 1.0, 1e-12);
  EXPECT_NEAR(s.std_ps, 0.0, 1e-12);
  EXPECT_EQ(s.min_ra, 2);
  EXPECT_EQ(s.max_ra, 2);
  EXPECT_DOUBLE_EQ(s.std_ra, 0.0);
  EXPECT_DOUBLE_EQ(s.wall_time, 1.5);
}

TEST(Stats, TwoTierUnfair) {
  MatchingStats s = compute_stats(fixtures::two_tier(), fixtures::two_tier_unfair());
  EXPECT_NEAR(s.min_ps, 0.2, 1e-12);
  EXPECT_NEAR(s.max_ps, 1.8, 1e-12);
  // Population deviation of {1.8, 1.8, 0.2, 0.2}.
  EXPECT_NEAR(s.std_ps, 0.8, 1e-12);
}

TEST(Stats, EmptyMatching) {
  MatchingStats s = compute_stats(fixtures::two_tier(), Matching::zeros(4, 4));
  EXPECT_DOUBLE_EQ(s.min_ps, 0.0);
  EXPECT_DOUBLE_EQ(s.max_ps, 0.0);
  EXPECT_DOUBLE_EQ(s.mean_ps, 0.0);
  EXPECT_DOUBLE_EQ(s.std_ps, 0.0);
  EXPECT_EQ(s.max_ra, 0);
}

TEST(Stats, AgreesWithCoreAndOrdering) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Instance inst = fixtures::random_instance(seed);
    Rng rng(seed);
    Matching m = Matching::zeros(inst.num_reviewers(), inst.num_papers());
    for (Index i = 0; i < inst.num_reviewers(); ++i)
      for (Index j = 0; j < inst.num_papers(); ++j)
        if (rng.uniform() < 0.5) m.assign(i, j);
    MatchingStats s = compute_stats(inst, m);
    EXPECT_NEAR(s.objective, objective(inst, m), 1e-9);
    EXPECT_LE(s.min_ps, s.mean_ps + 1e-12);
    EXPECT_LE(s.mean_ps, s.max_ps + 1e-12);
    EXPECT_GE(s.std_ps, 0.0);
    EXPECT_GE(s.std_ra, 0.0);
    // Population variance via the two-pass formula.
    Vector ps = paper_scores(inst, m);
    double var = 0.0;
    for (double v : ps) var += (v - s.mean_ps) * (v - s.mean_ps);
    EXPECT_NEAR(s.std_ps, std::sqrt(var / ps.size()), 1e-12);
  }
}

std::vector<double> one_to(int n) {
  std::vector<double> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

TEST(Profile, OneToTwentyFirstQuintile) {
  Profile p = compute_profile(one_to(20));
  ASSERT_EQ(p.quintiles.size(), 5u);
  const QuintileBox& q = p.quintiles[0];
  EXPECT_DOUBLE_EQ(q.box_lo, 2.0);
  EXPECT_DOUBLE_EQ(q.box_hi, 3.0);
  EXPECT_DOUBLE_EQ(q.whisker_lo, 2.0);
  EXPECT_DOUBLE_EQ(q.whisker_hi, 3.0);
  EXPECT_EQ(q.outliers, (std::vector<double>{1.0, 4.0}));
  EXPECT_DOUBLE_EQ(q.median, 2.5);
  EXPECT_DOUBLE_EQ(p.quintiles[4].median, 18.5);
}

TEST(Profile, IdenticalScoresDegenerate) {
  Profile p = compute_profile(std::vector<double>(5, 0.7));
  for (const auto& q : p.quintiles) {
    EXPECT_EQ(q.size, 1);
    EXPECT_DOUBLE_EQ(q.box_lo, 0.7);
    EXPECT_DOUBLE_EQ(q.box_hi, 0.7);
    EXPECT_DOUBLE_EQ(q.median, 0.7);
    EXPECT_TRUE(q.outliers.empty());
  }
}

TEST(Profile, RemainderGoesToLastQuintile) {
  Profile p = compute_profile(one_to(23));
  Index total = 0;
  for (const auto& q : p.quintiles) total += q.size;
  EXPECT_EQ(total, 23);
  EXPECT_EQ(p.quintiles[0].size, 4);
  EXPECT_EQ(p.quintiles[4].size, 7);
}

TEST(Profile, GroupSizesFavourLaterGroups) {
  EXPECT_EQ(group_sizes(4), (std::array<Index, 4>{1, 1, 1, 1}));
  EXPECT_EQ(group_sizes(5), (std::array<Index, 4>{1, 1, 1, 2}));
  EXPECT_EQ(group_sizes(6), (std::array<Index, 4>{1, 1, 2, 2}));
  EXPECT_EQ(group_sizes(7), (std::array<Index, 4>{1, 2, 2, 2}));
  EXPECT_EQ(group_sizes(1), (std::array<Index, 4>{0, 0, 0, 1}));
}

TEST(Profile, RejectsShortInput) {
  EXPECT_THROW(compute_profile({1.0, 2.0, 3.0, 4.0}), Error);
}

TEST(Profile, UnsortedInputIsSorted) {
  std::vector<double> v = one_to(20);
  std::reverse(v.begin(), v.end());
  EXPECT_DOUBLE_EQ(compute_profile(v).quintiles[0].median, 2.5);
}

TEST(Profile, BoxOrderingAndTranslation) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const Index n = rng.integer(5, 60);
    std::vector<double> v(static_cast<size_t>(n));
    for (double& x : v) x = rng.uniform(-2, 3);
    const double shift = rng.uniform(-5, 5);
    std::vector<double> moved = v;
    for (double& x : moved) x += shift;
    Profile a = compute_profile(v);
    Profile b = compute_profile(moved);
    for (size_t k = 0; k < 5; ++k) {
      const QuintileBox& q = a.quintiles[k];
      const QuintileBox& r = b.quintiles[k];
      if (q.size >= 4) {
        EXPECT_LE(q.whisker_lo, q.box_lo);
        EXPECT_LE(q.box_lo, q.median);
        EXPECT_LE(q.median, q.box_hi);
        EXPECT_LE(q.box_hi, q.whisker_hi);
      }
      for (double o : q.outliers) EXPECT_TRUE(o < q.whisker_lo || o > q.whisker_hi);
      EXPECT_NEAR(r.box_lo, q.box_lo + shift, 1e-9);
      EXPECT_NEAR(r.box_hi, q.box_hi + shift, 1e-9);
      EXPECT_NEAR(r.whisker_lo, q.whisker_lo + shift, 1e-9);
      EXPECT_NEAR(r.whisker_hi, q.whisker_hi + shift, 1e-9);
      EXPECT_NEAR(r.median, q.median + shift, 1e-9);
      ASSERT_EQ(r.outliers.size(), q.outliers.size());
      for (size_t o = 0; o < q.outliers.size(); ++o)
        EXPECT_NEAR(r.outliers[o], q.outliers[o] + shift, 1e-9);
    }
  }
}

}  // namespace
