#include "fairmatch/fairir.hpp"

#include "fairmatch/log.hpp"
#include "fairmatch/tpms.hpp"

#include <cmath>

namespace fairmatch {

namespace {

enum class RowKind { load_ub, load_lb, coverage, fairness };

struct RowTag {
  RowKind kind;
  Index subject;
};

lp::LinearProgram build_program(const Instance& instance, double t,
                                 std::vector<RowTag>* tags) {
  const Index nr = instance.num_reviewers();
  const Index np = instance.num_papers();
  lp::LinearProgram program(nr * np);
  for (Index i = 0; i < nr; ++i)
    for (Index j = 0; j < np; ++j)
      program.set_objective(lp_var(instance, i, j), instance.affinity(i, j));

  auto tag = [tags](RowKind kind, Index subject) {
    if (tags) tags->push_back({kind, subject});
  };
  for (Index i = 0; i < nr; ++i) {
    lp::Row row;
    for (Index j = 0; j < np; ++j) row.terms.push_back({lp_var(instance, i, j), 1.0});
    row.relation = lp::Relation::le;
    row.rhs = instance.load_ub()(i);
    row.name = "load_ub_" + std::to_string(i);
    program.add_row(row);
    tag(RowKind::load_ub, i);
    if (instance.has_load_lb()) {
      row.relation = lp::Relation::ge;
      row.rhs = instance.load_lb()(i);
      row.name = "load_lb_" + std::to_string(i);
      program.add_row(std::move(row));
      tag(RowKind::load_lb, i);
    }
  }
  for (Index j = 0; j < np; ++j) {
    lp::Row row;
    for (Index i = 0; i < nr; ++i) row.terms.push_back({lp_var(instance, i, j), 1.0});
    row.relation = lp::Relation::eq;
    row.rhs = instance.coverage()(j);
    row.name = "coverage_" + std::to_string(j);
    program.add_row(std::move(row));
    tag(RowKind::coverage, j);
  }
  if (!(std::isinf(t) && t < 0)) {
    if (!std::isfinite(t)) throw Error("fairness threshold must be finite");
    for (Index j = 0; j < np; ++j) {
      lp::Row row;
      for (Index i = 0; i < nr; ++i)
        row.terms.push_back({lp_var(instance, i, j), instance.affinity(i, j)});
      row.relation = lp::Relation::ge;
      row.rhs = t;
      row.name = "fairness_" + std::to_string(j);
      program.add_row(std::move(row));
      tag(RowKind::fairness, j);
    }
  }
  return program;
}

// Integral point meeting every load and coverage row, used as the simplex
// starting point; nullopt when the flow solve fails.
std::optional<Vector> assignment_start(const Instance& instance) {
  try {
    Matching m = solve_assignment(instance);
    return m.values().transpose().reshaped();
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

lp::LinearProgram build_local_fairness_lp(const Instance& instance, double t) {
  return build_program(instance, t, nullptr);
}

bool check_threshold_feasible(const Instance& instance, double t) {
  if (!feasibility_precheck(instance)) return false;
  lp::SimplexOptions options;
  options.feasibility_only = true;
  std::optional<Vector> start = assignment_start(instance);
  lp::LpSolution sol = lp::solve_lp(build_local_fairness_lp(instance, t), options,
                                    start ? &*start : nullptr);
  return sol.status == lp::Status::feasible;
}

FairIrResult solve_fairir(const Instance& instance, double t,
                          const FairIrOptions& options) {
  require_feasible(instance);
  const Index nr = instance.num_reviewers();
  const Index np = instance.num_papers();
  const Index nv = nr * np;

  std::vector<RowTag> tags;
  lp::LinearProgram program = build_program(instance, t, &tags);
  std::vector<signed char> fixed(static_cast<size_t>(nv), -1);
  Index total_fixed = 0;

  FairIrReport report;
  const double a_min = instance.affinity().size() > 0 ? instance.affinity().minCoeff() : 0.0;
  report.fairness_slack_bound = instance.a_max() - std::min(0.0, a_min);

  double previous_objective = -lp::kInfinity;
  std::vector<Index> paper_frac(static_cast<size_t>(np));
  std::vector<Index> reviewer_frac(static_cast<size_t>(nr));
  std::optional<Vector> start = assignment_start(instance);

  while (true) {
    ++report.rounds;
    lp::LpSolution sol = lp::solve_lp(program, options.simplex, start ? &*start : nullptr);
    report.lp_iterations += sol.iterations;
    if (sol.status != lp::Status::optimal) {
      if (report.rounds == 1) {
        throw Error("threshold " + std::to_string(t) +
                    " is infeasible for the relaxed program");
      }
      throw Error("relaxation became " + lp::to_string(sol.status) + " in round " +
                  std::to_string(report.rounds));
    }
    if (sol.objective < previous_objective - 1e-7) {
      throw Error("relaxation objective decreased between rounds");
    }
    previous_objective = sol.objective;
    start = sol.values;
    if (options.verify_vertices) {
      ++report.vertex_checks;
      if (!lp::check_vertex(program, sol.values).ok()) ++report.vertex_failures;
    }

    // Fix every integral variable.
    Index newly_fixed = 0;
    std::fill(paper_frac.begin(), paper_frac.end(), 0);
    std::fill(reviewer_frac.begin(), reviewer_frac.end(), 0);
    Index fractional = 0;
    for (Index v = 0; v < nv; ++v) {
      if (fixed[v] >= 0) continue;
      double x = sol.values(v);
      if (lp::is_integral(x)) {
        int value = x > 0.5 ? 1 : 0;
        fixed[v] = static_cast<signed char>(value);
        program.set_bounds(v, {double(value), double(value)});
        ++newly_fixed;
        ++total_fixed;
      } else {
        ++fractional;
        ++reviewer_frac[v / np];
        ++paper_frac[v % np];
      }
    }

    FairIrRound round{report.rounds, newly_fixed, total_fixed, fractional, 0, 0,
                      sol.objective};
    if (fractional == 0) {
      report.final_lp_objective = sol.objective;
      report.history.push_back(round);
      log::emit(log::Level::info, {{"event", "fairir_round"},
                                   {"round", round.round},
                                   {"fixed", total_fixed},
                                   {"dropped", 0},
                                   {"objective", sol.objective}});
      break;
    }

    // Drop fairness rows of papers with at most 3 fractional variables,
    // else load rows of reviewers with at most 2.
    std::vector<bool> drop(tags.size(), false);
    for (size_t r = 0; r < tags.size(); ++r) {
      if (tags[r].kind != RowKind::fairness) continue;
      Index f = paper_frac[tags[r].subject];
      if (f >= 1 && f <= 3) {
        drop[r] = true;
        ++round.dropped_fairness;
      }
    }
    if (round.dropped_fairness == 0) {
      std::vector<bool> dropped_reviewer(static_cast<size_t>(nr), false);
      for (size_t r = 0; r < tags.size(); ++r) {
        if (tags[r].kind != RowKind::load_ub && tags[r].kind != RowKind::load_lb) continue;
        Index f = reviewer_frac[tags[r].subject];
        if (f >= 1 && f <= 2) {
          drop[r] = true;
          dropped_reviewer[tags[r].subject] = true;
        }
      }
      for (bool d : dropped_reviewer) round.dropped_loads += d ? 1 : 0;
    }
    if (newly_fixed == 0 && round.dropped_fairness == 0 && round.dropped_loads == 0) {
      throw Error("round " + std::to_string(report.rounds) +
                  " neither fixed a variable nor dropped a row");
    }
    for (Index r = static_cast<Index>(tags.size()) - 1; r >= 0; --r) {
      if (!drop[r]) continue;
      program.remove_row(r);
      tags.erase(tags.begin() + r);
    }
    report.dropped_fairness_count += round.dropped_fairness;
    report.dropped_load_count += round.dropped_loads;
    report.history.push_back(round);
    log::emit(log::Level::info, {{"event", "fairir_round"},
                                 {"round", round.round},
                                 {"fixed", total_fixed},
                                 {"dropped", round.dropped_fairness + round.dropped_loads},
                                 {"objective", sol.objective}});
  }

  Matrix values(nr, np);
  for (Index i = 0; i < nr; ++i)
    for (Index j = 0; j < np; ++j) values(i, j) = fixed[lp_var(instance, i, j)];
  Matching matching(std::move(values));

  // Postconditions.
  const Counts load = matching.loads();
  const Counts lb = instance.load_lb();
  for (Index i = 0; i < nr; ++i) {
    report.max_load_violation = std::max({report.max_load_violation,
                                          load(i) - instance.load_ub()(i),
                                          lb(i) - load(i)});
  }
  if (std::isfinite(t)) {
    const Vector scores = paper_scores(instance, matching);
    for (Index j = 0; j < np; ++j)
      report.max_fairness_violation = std::max(report.max_fairness_violation, t - scores(j));
  }
  if (matching.coverage() != instance.coverage()) {
    throw Error("FairIR output misses a coverage constraint");
  }
  if (report.max_load_violation > 1) {
    throw Error("FairIR load violation " + std::to_string(report.max_load_violation) +
                " exceeds 1");
  }
  if (report.max_fairness_violation > report.fairness_slack_bound + 1e-7) {
    throw Error("FairIR fairness violation " +
                std::to_string(report.max_fairness_violation) + " exceeds bound " +
                std::to_string(report.fairness_slack_bound));
  }
  return {std::move(matching), std::move(report)};
}

}  // namespace fairmatch
