#pragma once

#include "fairmatch/core.hpp"

#include <array>
#include <string>
#include <vector>

namespace fairmatch {

/// Summary columns of a matching: paper scores (PS) and reviewer
/// assignment counts (RA).
struct MatchingStats {
  double objective = 0.0;
  double min_ps = 0.0;
  double max_ps = 0.0;
  double mean_ps = 0.0;
  double std_ps = 0.0;
  int min_ra = 0;
  int max_ra = 0;
  double std_ra = 0.0;
  double wall_time = 0.0;
};

/// Population standard deviations throughout.
MatchingStats compute_stats(const Instance& instance, const Matching& matching,
                            double wall_time = 0.0);

struct QuintileBox {
  double box_lo = 0.0;
  double box_hi = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  double median = 0.0;
  std::vector<double> outliers;
  Index size = 0;
};

struct Profile {
  std::vector<QuintileBox> quintiles;  // always 5
};

/// Sorts the scores, cuts them into five quintiles of floor(n/5) with the
/// last one taking the remainder, and summarises each as a boxplot.
Profile compute_profile(std::vector<double> scores);

/// Boxplot of one sorted group of scores.
QuintileBox quintile_box(const std::vector<double>& sorted);

/// Sizes of the a, b, c, d groups for a quintile of `size` scores.
std::array<Index, 4> group_sizes(Index size);

}  // namespace fairmatch
