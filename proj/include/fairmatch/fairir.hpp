#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/lp.hpp"

#include <limits>
#include <vector>

namespace fairmatch {

/// Variable index of x_ij in the local-fairness LP.
inline Index lp_var(const Instance& instance, Index reviewer, Index paper) {
  return reviewer * instance.num_papers() + paper;
}

/// Pass this threshold to omit the per-paper fairness rows.
inline constexpr double kNoThreshold = -std::numeric_limits<double>::infinity();

/// Relaxed local-fairness program: x_ij in [0,1], reviewer load rows,
/// coverage equalities, and one fairness row sum_i A_ij x_ij >= t per paper.
/// Rows are named load_ub_<i>, load_lb_<i>, coverage_<j>, fairness_<j>.
lp::LinearProgram build_local_fairness_lp(const Instance& instance, double t);

/// True iff the relaxation at threshold t is feasible; the precheck is run
/// first.
bool check_threshold_feasible(const Instance& instance, double t);

struct FairIrOptions {
  /// Run check_vertex on every LP optimum (dense rank test, small problems).
  bool verify_vertices = false;
  lp::SimplexOptions simplex;
};

struct FairIrRound {
  Index round;
  Index newly_fixed;
  Index total_fixed;
  Index fractional;
  Index dropped_fairness;
  Index dropped_loads;
  double objective;  // LP optimum of this round's relaxation
};

struct FairIrReport {
  Index rounds = 0;
  Index dropped_fairness_count = 0;
  Index dropped_load_count = 0;
  double max_fairness_violation = 0.0;
  int max_load_violation = 0;
  /// Allowed fairness slack: A_max, widened by |min affinity| when some
  /// affinities are negative.
  double fairness_slack_bound = 0.0;
  double final_lp_objective = 0.0;
  long lp_iterations = 0;
  Index vertex_checks = 0;
  Index vertex_failures = 0;
  std::vector<FairIrRound> history;
};

struct FairIrResult {
  Matching matching;
  FairIrReport report;
};

/// Iterative relaxation: solve the LP, fix integral variables, drop the
/// fairness rows of papers with at most 3 fractional variables or (when no
/// fairness row went) the load rows of reviewers with at most 2, repeat until
/// integral. Throws Error when t is infeasible or a guarantee is broken.
FairIrResult solve_fairir(const Instance& instance, double t,
                          const FairIrOptions& options = {});

}  // namespace fairmatch
