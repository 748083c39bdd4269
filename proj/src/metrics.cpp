#include "fairmatch/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fairmatch {

namespace {

double population_std(const Vector& v) {
  if (v.size() == 0) return 0.0;
  return std::sqrt((v.array() - v.mean()).square().mean());
}

}  // namespace

MatchingStats compute_stats(const Instance& instance, const Matching& matching,
                            double wall_time) {
  check_shapes(instance, matching);
  if (!matching.integral()) throw Error("compute_stats needs an integral matching");
  MatchingStats s;
  s.wall_time = wall_time;
  s.objective = objective(instance, matching);
  const Vector ps = paper_scores(instance, matching);
  if (ps.size() > 0) {
    s.min_ps = ps.minCoeff();
    s.max_ps = ps.maxCoeff();
    s.mean_ps = ps.mean();
    s.std_ps = population_std(ps);
  }
  const Counts ra = matching.loads();
  if (ra.size() > 0) {
    s.min_ra = ra.minCoeff();
    s.max_ra = ra.maxCoeff();
    s.std_ra = population_std(ra.cast<double>());
  }
  return s;
}

std::array<Index, 4> group_sizes(Index size) {
  const Index base = size / 4;
  const Index rem = size % 4;
  return {base, base + (rem >= 3), base + (rem >= 2), base + (rem >= 1)};
}

QuintileBox quintile_box(const std::vector<double>& x) {
  QuintileBox q;
  const Index s = static_cast<Index>(x.size());
  q.size = s;
  if (s == 0) return q;
  const auto g = group_sizes(s);
  const Index b_first = std::min(g[0], s - 1);
  const Index c_last = std::max(g[0] + g[1] + g[2] - 1, b_first);
  q.box_lo = x[b_first];
  q.box_hi = x[c_last];
  const double half = (q.box_hi - q.box_lo) / 2;
  const double lo_fence = q.box_lo - half;
  const double hi_fence = q.box_hi + half;
  q.whisker_lo = q.box_lo;
  q.whisker_hi = q.box_hi;
  for (double v : x) {
    if (v >= lo_fence) {
      q.whisker_lo = std::min(q.whisker_lo, v);
      break;
    }
  }
  for (auto it = x.rbegin(); it != x.rend(); ++it) {
    if (*it <= hi_fence) {
      q.whisker_hi = std::max(q.whisker_hi, *it);
      break;
    }
  }
  for (double v : x)
    if (v < q.whisker_lo || v > q.whisker_hi) q.outliers.push_back(v);
  q.median = s % 2 ? x[s / 2] : 0.5 * (x[s / 2 - 1] + x[s / 2]);
  return q;
}

Profile compute_profile(std::vector<double> scores) {
  const Index n = static_cast<Index>(scores.size());
  if (n < 5) throw Error("a profile needs at least 5 scores, got " + std::to_string(n));
  std::sort(scores.begin(), scores.end());
  Profile p;
  const Index q = n / 5;
  for (Index k = 0; k < 5; ++k) {
    auto first = scores.begin() + k * q;
    auto last = k == 4 ? scores.end() : first + q;
    p.quintiles.push_back(quintile_box(std::vector<double>(first, last)));
  }
  return p;
}

}  // namespace fairmatch
