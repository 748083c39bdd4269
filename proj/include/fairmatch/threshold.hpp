#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/fairflow.hpp"

#include <optional>
#include <vector>

namespace fairmatch {

struct Probe {
  double t;
  /// FairIR: relaxation feasible. FairFlow: no paper left below t - A_max.
  bool success;
  /// FairFlow only: min paper score reached at this t.
  double min_score = 0.0;
};

struct ThresholdSearchResult {
  double t_star = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<Probe> probes;
  std::optional<Matching> best_matching;  // FairFlow only
  double best_min_score = 0.0;            // FairFlow only
};

/// Search range: lowest and highest per-paper sums of C_j column affinities
/// (smallest and largest respectively).
std::pair<double, double> threshold_range(const Instance& instance);

/// Binary search for the highest t whose relaxation is feasible. t_lo is
/// checked first; iterations = 0 returns t_lo without probing.
ThresholdSearchResult search_t_fairir(const Instance& instance, int iterations);

struct FairFlowSearchOptions {
  FairFlowConfig config;
  /// Stop probing once this many seconds have elapsed.
  std::optional<double> time_budget;
};

/// Binary search over solve_fairflow runs, each warm-started from the last
/// matching. The run at t_lo seeds the best result; a later probe replaces it
/// only with a strictly larger min paper score.
ThresholdSearchResult search_t_fairflow(const Instance& instance, int iterations,
                                        const FairFlowSearchOptions& options = {});

/// Min paper score of FairFlow at t = 0, plus A_max / 2.
double heuristic_t(const Instance& instance, const FairFlowConfig& config = {});

}  // namespace fairmatch
