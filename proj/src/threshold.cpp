#include "fairmatch/threshold.hpp"

#include "fairmatch/fairir.hpp"
#include "fairmatch/log.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

namespace fairmatch {

std::pair<double, double> threshold_range(const Instance& instance) {
  double lo = 0.0;
  double hi = 0.0;
  for (Index j = 0; j < instance.num_papers(); ++j) {
    Vector col = instance.affinity().col(j);
    std::sort(col.begin(), col.end());
    const Index c = std::min<Index>(instance.coverage()(j), col.size());
    const double low = col.head(c).sum();
    const double high = col.tail(c).sum();
    if (j == 0) {
      lo = low;
      hi = high;
    } else {
      lo = std::min(lo, low);
      hi = std::max(hi, high);
    }
  }
  return {lo, hi};
}

ThresholdSearchResult search_t_fairir(const Instance& instance, int iterations) {
  require_feasible(instance);
  if (iterations < 0) throw Error("iterations must be >= 0");
  ThresholdSearchResult result;
  std::tie(result.t_lo, result.t_hi) = threshold_range(instance);
  result.t_star = result.t_lo;
  if (iterations == 0) return result;
  if (!check_threshold_feasible(instance, result.t_lo)) {
    throw Error("no feasible threshold: the relaxation is infeasible at t_lo = " +
                std::to_string(result.t_lo));
  }
  double lo = result.t_lo;
  double hi = result.t_hi;
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    const bool ok = check_threshold_feasible(instance, mid);
    result.probes.push_back({mid, ok});
    log::emit(log::Level::info, {{"event", "threshold_probe"},
                                 {"alg", "fairir"},
                                 {"t", mid},
                                 {"feasible", ok}});
    (ok ? lo : hi) = mid;
  }
  result.t_star = lo;
  return result;
}

namespace {

double min_score(const Instance& instance, const Matching& m) {
  Vector s = paper_scores(instance, m);
  return s.size() ? s.minCoeff() : 0.0;
}

}  // namespace

ThresholdSearchResult search_t_fairflow(const Instance& instance, int iterations,
                                        const FairFlowSearchOptions& options) {
  require_feasible(instance);
  if (iterations < 0) throw Error("iterations must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (!options.time_budget) return false;
    std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
    return spent.count() >= *options.time_budget;
  };

  ThresholdSearchResult result;
  std::tie(result.t_lo, result.t_hi) = threshold_range(instance);
  FairFlowResult base = solve_fairflow(instance, result.t_lo, options.config);
  result.t_star = result.t_lo;
  result.best_min_score = base.report.final_min_score;
  result.best_matching = base.matching;
  Matching previous = std::move(base.matching);

  double lo = result.t_lo;
  double hi = result.t_hi;
  for (int k = 0; k < iterations && !out_of_time(); ++k) {
    const double mid = 0.5 * (lo + hi);
    FairFlowResult run = solve_fairflow(instance, mid, options.config, &previous);
    const double score = min_score(instance, run.matching);
    const bool ok = score >= mid - instance.a_max() - kScoreTol;
    result.probes.push_back({mid, ok, score});
    log::emit(log::Level::info, {{"event", "threshold_probe"},
                                 {"alg", "fairflow"},
                                 {"t", mid},
                                 {"success", ok},
                                 {"min_score", score}});
    if (score > result.best_min_score + kScoreTol) {
      result.best_min_score = score;
      result.t_star = mid;
      result.best_matching = run.matching;
    }
    (ok ? lo : hi) = mid;
    previous = std::move(run.matching);
  }
  return result;
}

double heuristic_t(const Instance& instance, const FairFlowConfig& config) {
  FairFlowResult run = solve_fairflow(instance, 0.0, config);
  return run.report.final_min_score + 0.5 * instance.a_max();
}

}  // namespace fairmatch
