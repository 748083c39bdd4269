#pragma once

#include "fairmatch/core.hpp"
#include "fairmatch/mcf.hpp"

#include <cstdint>

namespace fairmatch {

/// Integer cost scale W for affinity-derived arc costs.
struct ScalingConfig {
  std::int64_t w = 100'000;
};

/// Rounded cost -round(affinity * scale), with an overflow check.
std::int64_t scaled_cost(double affinity, std::int64_t scale);

/// Node numbering of the reviewer/paper assignment network.
struct AssignmentLayout {
  Index source = 0;
  Index sink = 0;
  Index reviewer_base = 0;  // reviewer i -> reviewer_base + i
  Index paper_base = 0;     // paper j -> paper_base + j
  Index num_reviewers = 0;
  Index num_papers = 0;

  bool is_reviewer(Index node) const {
    return node >= reviewer_base && node < reviewer_base + num_reviewers;
  }
  bool is_paper(Index node) const {
    return node >= paper_base && node < paper_base + num_papers;
  }
};

/// The four-step reviewer/paper network: s -> reviewers (cap U_i),
/// reviewer -> paper (cap 1, cost -round(A_ij * W)), paper -> t (cap C_j).
mcf::FlowNetwork build_assignment_network(const Instance& instance,
                                          const ScalingConfig& scaling,
                                          AssignmentLayout* layout = nullptr);

/// Generalised network used by the lower-bound phases and coverage repair:
/// per-reviewer and per-paper capacities, pairs in `blocked` get no arc.
mcf::FlowNetwork build_assignment_network(const Instance& instance,
                                          const ScalingConfig& scaling,
                                          const Counts& reviewer_cap,
                                          const Counts& paper_cap,
                                          const Matching* blocked,
                                          AssignmentLayout* layout);

/// Adds every utilised reviewer -> paper arc of `plan` to `matching`.
void apply_assignment_plan(const mcf::FlowNetwork& network,
                           const mcf::FlowPlan& plan,
                           const AssignmentLayout& layout, Matching& matching);

/// Optimal TPMS matching (no lower bounds; any load_lb is ignored).
Matching solve_tpms(const Instance& instance, const ScalingConfig& scaling = {});

/// Two-phase lower-bound construction: route sum(L) with reviewer caps L_i,
/// then the rest with caps U_i - L_i over the remaining coverage.
Matching solve_tpms_with_lb(const Instance& instance,
                            const ScalingConfig& scaling = {});

/// solve_tpms_with_lb when the instance has lower bounds, else solve_tpms.
Matching solve_assignment(const Instance& instance,
                          const ScalingConfig& scaling = {});

}  // namespace fairmatch
