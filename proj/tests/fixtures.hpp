#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/generator.hpp"

#include <cstdint>
#include <initializer_list>
#include <utility>

namespace fixtures {

using namespace fairmatch;

// Four reviewers and four papers, U = L = C = 2. Reviewers 0 and 1 have
// affinity 0.9 with every paper, reviewers 2 and 3 have 0.1.
inline Instance two_tier(bool with_lb = true) {
  Matrix a(4, 4);
  a.topRows(2).setConstant(0.9);
  a.bottomRows(2).setConstant(0.1);
  std::optional<Counts> lb;
  if (with_lb) lb = Counts::Constant(4, 2);
  return Instance(a, Counts::Constant(4, 2), Counts::Constant(4, 2), lb);
}

inline Matching from_pairs(Index reviewers, Index papers,
                           std::initializer_list<std::pair<Index, Index>> pairs) {
  Matching m = Matching::zeros(reviewers, papers);
  for (auto [r, p] : pairs) m.assign(r, p);
  return m;
}

// Papers 0 and 1 get both strong reviewers; 2 and 3 get the weak ones.
inline Matching two_tier_unfair() {
  return from_pairs(4, 4, {{0, 0}, {1, 0}, {0, 1}, {1, 1},
                           {2, 2}, {3, 2}, {2, 3}, {3, 3}});
}

// Every paper gets one strong and one weak reviewer.
inline Matching two_tier_fair() {
  return from_pairs(4, 4, {{0, 0}, {2, 0}, {0, 1}, {3, 1},
                           {1, 2}, {2, 2}, {1, 3}, {3, 3}});
}

// Small random instance that passes the precheck: reviewers in
// [min_r, max_r], papers in [min_p, max_p], coverage in [1, max_c].
struct TinySpec {
  Index min_r = 2, max_r = 5;
  Index min_p = 1, max_p = 4;
  int max_c = 2;
  double lo = 0.0, hi = 1.0;
  bool lower_bounds = false;
};

inline Instance random_instance(std::uint64_t seed, const TinySpec& spec = {}) {
  Rng rng(seed);
  const Index nr = rng.integer(spec.min_r, spec.max_r);
  const Index np = rng.integer(spec.min_p, spec.max_p);
  Matrix a(nr, np);
  for (Index i = 0; i < nr; ++i)
    for (Index j = 0; j < np; ++j) a(i, j) = rng.uniform(spec.lo, spec.hi);
  Counts cov(np);
  for (Index j = 0; j < np; ++j)
    cov(j) = static_cast<int>(rng.integer(1, std::min<Index>(spec.max_c, nr)));
  // Spread the total coverage over the reviewers, then add slack.
  const int total = cov.sum();
  Counts ub = Counts::Constant(nr, total / static_cast<int>(nr));
  for (Index i = 0; i < total % nr; ++i) ++ub(i);
  for (Index i = 0; i < nr; ++i) ub(i) += static_cast<int>(rng.integer(0, 1));
  std::optional<Counts> lb;
  if (spec.lower_bounds) {
    lb = Counts(nr);
    for (Index i = 0; i < nr; ++i) (*lb)(i) = std::max(0, ub(i) - 2);
    while (lb->sum() > total) {
      for (Index i = 0; i < nr && lb->sum() > total; ++i)
        if ((*lb)(i) > 0) --(*lb)(i);
    }
  }
  return Instance(a, ub, cov, lb);
}

// Uniform instance with fixed shape and a constant coverage.
inline Instance shaped_instance(std::uint64_t seed, Index nr, Index np, int c,
                                int ub, std::optional<int> lb = std::nullopt,
                                double lo = 0.0, double hi = 1.0) {
  GeneratorSpec g;
  g.num_reviewers = nr;
  g.num_papers = np;
  g.coverage = c;
  g.load_ub = ub;
  g.load_lb = lb;
  g.lo = lo;
  g.hi = hi;
  g.seed = seed;
  return generate(g);
}

}  // namespace fixtures
