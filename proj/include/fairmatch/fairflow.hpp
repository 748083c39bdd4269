#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/mcf.hpp"
#include "fairmatch/tpms.hpp"

#include <cstdint>
#include <vector>

namespace fairmatch {

/// Papers grouped by score: plus >= t, t > zero >= t - A_max, minus below.
struct Partition {
  std::vector<Index> plus;
  std::vector<Index> zero;
  std::vector<Index> minus;
};

Partition partition_papers(const Instance& instance, const Matching& matching,
                           double t);

/// Removes, from every paper in `minus`, its assigned reviewer with the
/// lowest affinity (lowest reviewer index on ties).
Matching drop_worst_reviewer(const Instance& instance, const Matching& matching,
                             const std::vector<Index>& minus);

struct FairFlowConfig {
  std::int64_t w = 100'000;
  std::int64_t z = 100'000'000;  // must exceed w
  int max_iterations = 50;
  /// Re-solve phase 1 from scratch every iteration instead of continuing
  /// from the repaired matching. Kept for differential testing.
  bool cold_phase1 = false;
};

/// Node numbering of a refinement network.
struct RefinementLayout {
  Index source = 0;
  Index sink = 1;
  Index paper_base = 2;
  Index reviewer_base = 0;
  Index num_papers = 0;
  Index num_reviewers = 0;
  std::vector<Index> dummy;  // per paper: dummy node, or -1

  bool is_paper(Index node) const {
    return node >= paper_base && node < paper_base + num_papers;
  }
  bool is_reviewer(Index node) const {
    return node >= reviewer_base && node < reviewer_base + num_reviewers;
  }
  /// Paper whose dummy node is `node`, or -1.
  Index paper_of_dummy(Index node) const;
};

/// Network routing one reviewer out of each advantaged paper towards the
/// deficient ones, with dummy nodes limiting each near-threshold paper to a
/// single swap. `matching` is the post-drop assignment; `partition` the
/// grouping computed before the drop.
mcf::FlowNetwork build_refinement_network(const Instance& instance,
                                          const Matching& matching,
                                          const Partition& partition, double t,
                                          const FairFlowConfig& config,
                                          RefinementLayout* layout = nullptr);

/// Reviewer -> paper (or dummy) flow assigns, paper -> reviewer flow
/// unassigns.
Matching apply_flow_plan(const Matching& matching, const mcf::FlowPlan& plan,
                         const mcf::FlowNetwork& network,
                         const RefinementLayout& layout);

/// Fills coverage deficits by min-cost flow over reviewers with spare
/// capacity, never duplicating an existing pair. Reviewers below their lower
/// bound are served first.
Matching repair_coverage(const Instance& instance, const Matching& matching,
                         const ScalingConfig& scaling = {});

struct FairFlowReport {
  int iterations = 0;
  std::vector<Index> minus_history;  // |P-| at each phase-1 partition
  double final_min_score = 0.0;
  /// Cycles rolled back because a paper outside P- fell into P-.
  int growth_rollbacks = 0;
  /// Cycles rolled back because coverage could not be repaired.
  int repair_failures = 0;
  bool hit_iteration_limit = false;
};

struct FairFlowResult {
  Matching matching;
  FairFlowReport report;
};

/// Partition / drop / refine / repair until P- is empty or its size stops
/// shrinking. `warm_start`, when given, replaces the first phase-1 solve and
/// must be a valid matching.
FairFlowResult solve_fairflow(const Instance& instance, double t,
                              const FairFlowConfig& config = {},
                              const Matching* warm_start = nullptr);

}  // namespace fairmatch
