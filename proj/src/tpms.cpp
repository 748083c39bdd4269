#include "fairmatch/tpms.hpp"

#include <cmath>

namespace fairmatch {

std::int64_t scaled_cost(double affinity, std::int64_t scale) {
  double v = affinity * static_cast<double>(scale);
  if (!std::isfinite(v) || std::abs(v) > 9.0e15) {
    throw Error("affinity " + std::to_string(affinity) + " times scale " +
                std::to_string(scale) + " overflows integer arc costs");
  }
  return -static_cast<std::int64_t>(std::llround(v));
}

namespace {

void check_scaling(const ScalingConfig& scaling) {
  if (scaling.w < 1) throw Error("cost scale W must be >= 1");
}

}  // namespace

mcf::FlowNetwork build_assignment_network(const Instance& instance,
                                          const ScalingConfig& scaling,
                                          AssignmentLayout* layout) {
  check_scaling(scaling);
  require_feasible(instance);
  const Index nr = instance.num_reviewers();
  const Index np = instance.num_papers();
  mcf::FlowNetwork net(nr + np + 2);
  AssignmentLayout l{0, nr + np + 1, 1, 1 + nr, nr, np};
  const std::int64_t supply = instance.coverage().cast<std::int64_t>().sum();
  net.set_supply(l.source, supply);
  net.set_supply(l.sink, -supply);
  for (Index i = 0; i < nr; ++i) net.add_arc(l.source, l.reviewer_base + i, instance.load_ub()(i), 0);
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j < np; ++j) {
      net.add_arc(l.reviewer_base + i, l.paper_base + j, 1,
                  scaled_cost(instance.affinity(i, j), scaling.w));
    }
  }
  for (Index j = 0; j < np; ++j) net.add_arc(l.paper_base + j, l.sink, instance.coverage()(j), 0);
  if (layout) *layout = l;
  return net;
}

mcf::FlowNetwork build_assignment_network(const Instance& instance,
                                          const ScalingConfig& scaling,
                                          const Counts& reviewer_cap,
                                          const Counts& paper_cap,
                                          const Matching* blocked,
                                          AssignmentLayout* layout) {
  check_scaling(scaling);
  const Index nr = instance.num_reviewers();
  const Index np = instance.num_papers();
  if (reviewer_cap.size() != nr || paper_cap.size() != np) {
    throw Error("capacity vectors do not match the instance");
  }
  if (blocked) check_shapes(instance, *blocked);
  mcf::FlowNetwork net(nr + np + 2);
  AssignmentLayout l{0, nr + np + 1, 1, 1 + nr, nr, np};
  std::int64_t supply = 0;
  for (Index j = 0; j < np; ++j) {
    if (paper_cap(j) < 0) throw Error("negative paper capacity");
    supply += paper_cap(j);
  }
  net.set_supply(l.source, supply);
  net.set_supply(l.sink, -supply);
  for (Index i = 0; i < nr; ++i) {
    if (reviewer_cap(i) < 0) throw Error("negative reviewer capacity");
    if (reviewer_cap(i) > 0) net.add_arc(l.source, l.reviewer_base + i, reviewer_cap(i), 0);
  }
  for (Index i = 0; i < nr; ++i) {
    if (reviewer_cap(i) == 0) continue;
    for (Index j = 0; j < np; ++j) {
      if (paper_cap(j) == 0 || (blocked && blocked->assigned(i, j))) continue;
      net.add_arc(l.reviewer_base + i, l.paper_base + j, 1,
                  scaled_cost(instance.affinity(i, j), scaling.w));
    }
  }
  for (Index j = 0; j < np; ++j) {
    if (paper_cap(j) > 0) net.add_arc(l.paper_base + j, l.sink, paper_cap(j), 0);
  }
  if (layout) *layout = l;
  return net;
}

void apply_assignment_plan(const mcf::FlowNetwork& network,
                           const mcf::FlowPlan& plan,
                           const AssignmentLayout& layout, Matching& matching) {
  for (Index k = 0; k < network.num_arcs(); ++k) {
    if (plan.flow[k] == 0) continue;
    const mcf::Arc& a = network.arc(k);
    if (layout.is_reviewer(a.from) && layout.is_paper(a.to)) {
      Index i = a.from - layout.reviewer_base;
      Index j = a.to - layout.paper_base;
      if (matching.assigned(i, j)) {
        throw Error("flow plan re-assigns reviewer " + std::to_string(i) +
                    " to paper " + std::to_string(j));
      }
      matching.assign(i, j);
    }
  }
}

Matching solve_tpms(const Instance& instance, const ScalingConfig& scaling) {
  AssignmentLayout layout;
  mcf::FlowNetwork net = build_assignment_network(instance, scaling, &layout);
  mcf::FlowPlan plan = mcf::solve_min_cost_flow(net);
  const std::int64_t need = net.total_supply();
  if (plan.total_flow != need) {
    throw Error("infeasible instance: routed " + std::to_string(plan.total_flow) +
                " of " + std::to_string(need) + " required reviews");
  }
  Matching m = Matching::zeros(instance.num_reviewers(), instance.num_papers());
  apply_assignment_plan(net, plan, layout, m);
  return m;
}

Matching solve_tpms_with_lb(const Instance& instance, const ScalingConfig& scaling) {
  require_feasible(instance);
  const Counts lb = instance.load_lb();
  Matching m = Matching::zeros(instance.num_reviewers(), instance.num_papers());

  // Phase A: satisfy every lower bound.
  AssignmentLayout layout;
  mcf::FlowNetwork first = build_assignment_network(instance, scaling, lb,
                                                    instance.coverage(), nullptr, &layout);
  mcf::FlowPlan first_plan = mcf::solve_min_cost_flow(first);
  const std::int64_t lb_total = lb.cast<std::int64_t>().sum();
  if (first_plan.total_flow != lb_total) {
    throw Error("infeasible lower-bound split: routed " +
                std::to_string(first_plan.total_flow) + " of " +
                std::to_string(lb_total) + " lower-bound reviews");
  }
  apply_assignment_plan(first, first_plan, layout, m);

  // Phase B: remaining capacity and coverage, excluding used pairs.
  const Counts reviewer_cap = instance.load_ub() - lb;
  const Counts paper_cap = instance.coverage() - m.coverage();
  mcf::FlowNetwork second = build_assignment_network(instance, scaling, reviewer_cap,
                                                     paper_cap, &m, &layout);
  mcf::FlowPlan second_plan = mcf::solve_min_cost_flow(second);
  const std::int64_t rest = paper_cap.cast<std::int64_t>().sum();
  if (second_plan.total_flow != rest) {
    throw Error("infeasible lower-bound split: second phase routed " +
                std::to_string(second_plan.total_flow) + " of " +
                std::to_string(rest) + " remaining reviews");
  }
  apply_assignment_plan(second, second_plan, layout, m);
  return m;
}

Matching solve_assignment(const Instance& instance, const ScalingConfig& scaling) {
  return instance.has_load_lb() ? solve_tpms_with_lb(instance, scaling)
                                : solve_tpms(instance, scaling);
}

}  // namespace fairmatch
