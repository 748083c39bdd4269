#include "fairmatch/fairflow.hpp"

#include "fairmatch/log.hpp"

#include <algorithm>

namespace fairmatch {

Partition partition_papers(const Instance& instance, const Matching& matching,
                           double t) {
  if (!matching.integral()) throw Error("partition_papers needs an integral matching");
  const Vector scores = paper_scores(instance, matching);
  const double floor = t - instance.a_max();
  Partition p;
  for (Index j = 0; j < scores.size(); ++j) {
    if (scores(j) >= t - kScoreTol) {
      p.plus.push_back(j);
    } else if (scores(j) >= floor - kScoreTol) {
      p.zero.push_back(j);
    } else {
      p.minus.push_back(j);
    }
  }
  return p;
}

Matching drop_worst_reviewer(const Instance& instance, const Matching& matching,
                             const std::vector<Index>& minus) {
  check_shapes(instance, matching);
  Matching out = matching;
  for (Index j : minus) {
    Index worst = -1;
    for (Index i = 0; i < instance.num_reviewers(); ++i) {
      if (!matching.assigned(i, j)) continue;
      if (worst < 0 || instance.affinity(i, j) < instance.affinity(worst, j)) worst = i;
    }
    if (worst < 0) {
      throw Error("paper " + std::to_string(j) + " has no assigned reviewer to drop");
    }
    out.unassign(worst, j);
  }
  return out;
}

Index RefinementLayout::paper_of_dummy(Index node) const {
  for (Index j = 0; j < static_cast<Index>(dummy.size()); ++j)
    if (dummy[j] == node) return j;
  return -1;
}

namespace {

void check_config(const FairFlowConfig& config) {
  if (config.w < 1) throw Error("W must be >= 1");
  if (config.z <= config.w) throw Error("Z must be larger than W");
}

}  // namespace

mcf::FlowNetwork build_refinement_network(const Instance& instance,
                                          const Matching& matching,
                                          const Partition& partition, double t,
                                          const FairFlowConfig& config,
                                          RefinementLayout* layout_out) {
  check_config(config);
  check_shapes(instance, matching);
  const Index nr = instance.num_reviewers();
  const Index np = instance.num_papers();
  const double floor = t - instance.a_max();
  const Vector scores = paper_scores(instance, matching);

  RefinementLayout layout;
  layout.num_papers = np;
  layout.num_reviewers = nr;
  layout.reviewer_base = layout.paper_base + np;
  layout.dummy.assign(static_cast<size_t>(np), -1);
  mcf::FlowNetwork net(2 + np + nr);
  for (Index j : partition.zero) layout.dummy[j] = net.add_node();

  const std::int64_t supply = static_cast<std::int64_t>(
      std::min(partition.plus.size(), partition.minus.size()));
  net.set_supply(layout.source, supply);
  net.set_supply(layout.sink, -supply);

  auto paper_node = [&](Index j) { return layout.paper_base + j; };
  auto reviewer_node = [&](Index i) { return layout.reviewer_base + i; };

  // Source into advantaged papers, and out to their reviewers.
  for (Index j : partition.plus) net.add_arc(layout.source, paper_node(j), 1, 0);
  std::vector<bool> serves_plus(static_cast<size_t>(nr), false);
  for (Index j : partition.plus) {
    for (Index i = 0; i < nr; ++i) {
      if (!matching.assigned(i, j)) continue;
      net.add_arc(paper_node(j), reviewer_node(i), 1, 0);
      serves_plus[i] = true;
    }
  }

  // Near-threshold papers accept one reviewer through their dummy.
  for (Index j : partition.zero) net.add_arc(layout.dummy[j], paper_node(j), 1, 0);
  std::vector<std::vector<Index>> dummy_reviewers(static_cast<size_t>(np));
  for (Index i = 0; i < nr; ++i) {
    if (!serves_plus[i]) continue;
    for (Index j : partition.zero) {
      if (matching.assigned(i, j)) continue;
      net.add_arc(reviewer_node(i), layout.dummy[j], 1, 0);
      dummy_reviewers[j].push_back(i);
    }
  }

  // ...and may release a reviewer when the swap keeps them above the floor.
  for (Index j : partition.zero) {
    const auto& incoming = dummy_reviewers[j];
    if (incoming.empty()) continue;
    double a_min = instance.affinity(incoming.front(), j);
    for (Index i : incoming) a_min = std::min(a_min, instance.affinity(i, j));
    for (Index i = 0; i < nr; ++i) {
      if (!matching.assigned(i, j)) continue;
      if (floor <= scores(j) + a_min - instance.affinity(i, j) + kScoreTol) {
        net.add_arc(paper_node(j), reviewer_node(i), 1, 0);
      }
    }
  }

  // Any reviewer may move to a deficient paper; promoting moves cost on the
  // Z scale.
  for (Index i = 0; i < nr; ++i) {
    for (Index j : partition.minus) {
      if (matching.assigned(i, j)) continue;
      const double a = instance.affinity(i, j);
      const bool promotes = scores(j) + a >= floor - kScoreTol;
      net.add_arc(reviewer_node(i), paper_node(j), 1,
                  scaled_cost(a, promotes ? config.z : config.w));
    }
  }
  for (Index j : partition.minus) net.add_arc(paper_node(j), layout.sink, 1, 0);

  if (layout_out) *layout_out = std::move(layout);
  return net;
}

Matching apply_flow_plan(const Matching& matching, const mcf::FlowPlan& plan,
                         const mcf::FlowNetwork& network,
                         const RefinementLayout& layout) {
  if (static_cast<Index>(plan.flow.size()) != network.num_arcs()) {
    throw Error("flow plan does not belong to this network");
  }
  std::vector<Index> paper_of_node(static_cast<size_t>(network.num_nodes()), -1);
  for (Index j = 0; j < layout.num_papers; ++j) {
    paper_of_node[layout.paper_base + j] = j;
    if (layout.dummy[j] >= 0) paper_of_node[layout.dummy[j]] = j;
  }

  Matching out = matching;
  // Unassignments first so a reviewer can leave and re-enter in one plan.
  for (int pass = 0; pass < 2; ++pass) {
    for (Index k = 0; k < network.num_arcs(); ++k) {
      if (plan.flow[k] == 0) continue;
      const mcf::Arc& a = network.arc(k);
      if (pass == 0 && layout.is_paper(a.from) && layout.is_reviewer(a.to)) {
        Index j = a.from - layout.paper_base;
        Index i = a.to - layout.reviewer_base;
        if (!out.assigned(i, j)) {
          throw Error("flow unassigns reviewer " + std::to_string(i) +
                      " who is not on paper " + std::to_string(j));
        }
        out.unassign(i, j);
      } else if (pass == 1 && layout.is_reviewer(a.from) &&
                 !layout.is_reviewer(a.to) && paper_of_node[a.to] >= 0) {
        Index i = a.from - layout.reviewer_base;
        Index j = paper_of_node[a.to];
        if (out.assigned(i, j)) {
          throw Error("flow assigns reviewer " + std::to_string(i) +
                      " twice to paper " + std::to_string(j));
        }
        out.assign(i, j);
      }
    }
  }
  return out;
}

Matching repair_coverage(const Instance& instance, const Matching& matching,
                         const ScalingConfig& scaling) {
  check_shapes(instance, matching);
  const Counts cover = matching.coverage();
  const Counts load = matching.loads();
  Counts deficit = instance.coverage() - cover;
  if ((deficit.array() < 0).any()) throw Error("repair_coverage: a paper is over-covered");
  if ((load.array() > instance.load_ub().array()).any()) {
    throw Error("repair_coverage: a reviewer exceeds its load bound");
  }
  const std::int64_t total_deficit = deficit.cast<std::int64_t>().sum();
  if (total_deficit == 0) return matching;

  Matching out = matching;
  AssignmentLayout layout;
  Counts lb_gap = (instance.load_lb() - load).cwiseMax(0);
  if (lb_gap.sum() > 0) {
    mcf::FlowNetwork net =
        build_assignment_network(instance, scaling, lb_gap, deficit, &out, &layout);
    mcf::FlowPlan plan = mcf::solve_min_cost_flow(net);
    const std::int64_t need = std::min<std::int64_t>(lb_gap.sum(), total_deficit);
    if (plan.total_flow != need) {
      throw Error("repair infeasible: reviewers below their lower bound can cover only " +
                  std::to_string(plan.total_flow) + " of " + std::to_string(need));
    }
    apply_assignment_plan(net, plan, layout, out);
    deficit = instance.coverage() - out.coverage();
  }
  const Counts spare = instance.load_ub() - out.loads();
  mcf::FlowNetwork net =
      build_assignment_network(instance, scaling, spare, deficit, &out, &layout);
  mcf::FlowPlan plan = mcf::solve_min_cost_flow(net);
  const std::int64_t need = deficit.cast<std::int64_t>().sum();
  if (plan.total_flow != need) {
    throw Error("repair infeasible: covered " + std::to_string(plan.total_flow) +
                " of a coverage deficit of " + std::to_string(need));
  }
  apply_assignment_plan(net, plan, layout, out);
  return out;
}

namespace {

bool is_valid(const Instance& instance, const Matching& matching) {
  return validate(instance, matching).empty();
}

double min_score(const Instance& instance, const Matching& matching) {
  Vector s = paper_scores(instance, matching);
  return s.size() ? s.minCoeff() : 0.0;
}

}  // namespace

FairFlowResult solve_fairflow(const Instance& instance, double t,
                              const FairFlowConfig& config,
                              const Matching* warm_start) {
  check_config(config);
  require_feasible(instance);
  const ScalingConfig scaling{config.w};

  Matching current;
  if (warm_start) {
    check_shapes(instance, *warm_start);
    if (!warm_start->integral() || !is_valid(instance, *warm_start)) {
      throw Error("warm-start matching is not a valid matching for this instance");
    }
    current = *warm_start;
  } else {
    current = solve_assignment(instance, scaling);
  }

  FairFlowReport report;
  std::vector<bool> was_minus;
  for (int it = 1;; ++it) {
    if (it > config.max_iterations) {
      report.hit_iteration_limit = true;
      break;
    }
    if (it > 1 && config.cold_phase1) current = solve_assignment(instance, scaling);
    report.iterations = it;

    Partition part = partition_papers(instance, current, t);
    // Papers without reviews cannot be improved.
    std::erase_if(part.minus, [&](Index j) { return instance.coverage()(j) == 0; });
    const Index minus_count = static_cast<Index>(part.minus.size());
    const bool stalled = !report.minus_history.empty() &&
                         report.minus_history.back() == minus_count;
    report.minus_history.push_back(minus_count);
    log::emit(log::Level::info, {{"event", "fairflow_iteration"},
                                 {"iteration", it},
                                 {"plus", part.plus.size()},
                                 {"zero", part.zero.size()},
                                 {"minus", minus_count},
                                 {"min_score", min_score(instance, current)},
                                 {"objective", objective(instance, current)}});
    if (minus_count == 0 || stalled) break;

    was_minus.assign(static_cast<size_t>(instance.num_papers()), false);
    for (Index j : part.minus) was_minus[j] = true;

    Matching dropped = drop_worst_reviewer(instance, current, part.minus);
    RefinementLayout layout;
    mcf::FlowNetwork net =
        build_refinement_network(instance, dropped, part, t, config, &layout);
    mcf::FlowPlan plan = mcf::solve_min_cost_flow(net);
    Matching refined = apply_flow_plan(dropped, plan, net, layout);

    Matching repaired;
    try {
      repaired = repair_coverage(instance, refined, scaling);
    } catch (const Error& e) {
      ++report.repair_failures;
      log::emit(log::Level::info, {{"event", "fairflow_repair_failed"},
                                   {"iteration", it},
                                   {"reason", e.what()}});
      break;
    }
    if (!is_valid(instance, repaired)) {
      ++report.repair_failures;
      break;
    }

    // No paper outside P- may enter P- through a refinement cycle.
    Partition next = partition_papers(instance, repaired, t);
    bool violated = std::any_of(next.minus.begin(), next.minus.end(), [&](Index j) {
      return !was_minus[j] && instance.coverage()(j) > 0;
    });
    if (violated) {
      ++report.growth_rollbacks;
      log::emit(log::Level::info, {{"event", "fairflow_rollback"}, {"iteration", it}});
      break;
    }
    current = std::move(repaired);
  }

  report.final_min_score = min_score(instance, current);
  return {std::move(current), std::move(report)};
}

}  // namespace fairmatch
