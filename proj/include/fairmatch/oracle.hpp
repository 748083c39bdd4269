#pragma once

#include "fairmatch/core.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fairmatch::oracle {

/// Largest search space (product over papers of binom(R, C_j)) accepted.
inline constexpr double kMaxSearchSpace = 1e7;

/// Product over papers of binom(num_reviewers, C_j).
double search_space_size(const Instance& instance);

/// Visits every integral matching with exact coverage and loads in
/// [L_i, U_i], each exactly once, in lexicographic order of the per-paper
/// reviewer subsets. Returns the number visited.
std::size_t for_each_matching(const Instance& instance,
                              const std::function<void(const Matching&)>& visit);

std::vector<Matching> enumerate_matchings(const Instance& instance);

struct Best {
  double value;
  Matching matching;
};

/// Maximum objective over all admissible matchings.
Best brute_force_optimal(const Instance& instance);

/// Maximum objective among admissible matchings whose every paper score is
/// at least `threshold`; nullopt when none exists.
std::optional<Best> brute_force_optimal_fair(const Instance& instance,
                                             double threshold);

/// Matching maximising the minimum paper score (value = that minimum).
Best brute_force_maximin(const Instance& instance);

}  // namespace fairmatch::oracle
