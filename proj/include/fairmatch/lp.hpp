#pragma once

#include "fairmatch/core.hpp"

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace fairmatch::lp {

/// Values within this distance of 0 or 1 count as integral.
inline constexpr double kIntegralityTol = 1e-6;
/// Row slack below which a row is considered tight.
inline constexpr double kTightTol = 1e-7;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_integral(double v) {
  return std::abs(v) <= kIntegralityTol || std::abs(v - 1.0) <= kIntegralityTol;
}

enum class Relation { le, eq, ge };

struct Term {
  Index var;
  double coeff;
};

struct Row {
  std::vector<Term> terms;
  Relation relation = Relation::le;
  double rhs = 0.0;
  std::string name;
};

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Maximisation LP over bounded variables with sparse row constraints.
class LinearProgram {
 public:
  explicit LinearProgram(Index num_vars = 0);

  Index num_vars() const { return static_cast<Index>(objective_.size()); }
  Index num_rows() const { return static_cast<Index>(rows_.size()); }

  Index add_var(double objective_coeff, Bounds bounds = {});
  void set_objective(Index var, double coeff);
  void set_bounds(Index var, Bounds bounds);
  /// Appends a row and returns its index. Duplicate variable terms are
  /// summed.
  Index add_row(Row row);

  double objective_coeff(Index var) const { return objective_.at(var); }
  const std::vector<double>& objective_coeffs() const { return objective_; }
  const Bounds& bounds(Index var) const { return bounds_.at(var); }
  const std::vector<Bounds>& all_bounds() const { return bounds_; }
  const Row& row(Index r) const { return rows_.at(r); }
  const std::vector<Row>& rows() const { return rows_; }

  void remove_row(Index r);

 private:
  void check_var(Index var) const;

  std::vector<double> objective_;
  std::vector<Bounds> bounds_;
  std::vector<Row> rows_;
};

/// Copy of `program` with `var` pinned to `value` (0 or 1).
LinearProgram fix_variable(const LinearProgram& program, Index var, int value);

/// Copy of `program` without row `row`.
LinearProgram drop_row(const LinearProgram& program, Index row);

/// `feasible` is only returned when SimplexOptions::feasibility_only is set.
enum class Status { optimal, feasible, infeasible, unbounded };

std::string to_string(Status status);

struct LpSolution {
  Status status = Status::infeasible;
  Vector values;
  double objective = 0.0;
  long iterations = 0;
};

/// Raised when the simplex loses numerical control (singular basis,
/// iteration limit). Never reported as infeasibility.
class NumericalError : public Error {
 public:
  using Error::Error;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 50;
  /// Eta updates between refactorisations.
  int refactor_interval = 100;
  long max_iterations = 5'000'000;
  /// Stop at the first feasible basis.
  bool feasibility_only = false;
};

/// Bounded-variable revised primal simplex. An optimal result is always a
/// basic (vertex) solution. `start`, when given, places every variable at
/// the bound nearest its entry; the row logicals form the first basis.
LpSolution solve_lp(const LinearProgram& program,
                    const SimplexOptions& options = {},
                    const Vector* start = nullptr);

double row_activity(const Row& row, const Vector& values);

struct VertexCheck {
  Index fractional = 0;  // variables strictly inside their bounds
  Index tight_rows = 0;
  Index tight_rank = 0;  // rank of tight rows restricted to fractional vars
  bool ok() const { return fractional <= tight_rank; }
};

/// Counts fractional variables against linearly independent tight rows.
VertexCheck check_vertex(const LinearProgram& program, const Vector& values);

/// Largest bound or row violation of `values`.
double max_violation(const LinearProgram& program, const Vector& values);

/// CPLEX-style LP text dump.
void write_lp_format(const LinearProgram& program, std::ostream& out);

}  // namespace fairmatch::lp
