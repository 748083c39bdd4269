#include "fairmatch/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace fairmatch::lp {

LinearProgram::LinearProgram(Index num_vars)
    : objective_(static_cast<size_t>(num_vars), 0.0),
      bounds_(static_cast<size_t>(num_vars)) {}

void LinearProgram::check_var(Index var) const {
  if (var < 0 || var >= num_vars()) {
    throw Error("LP variable index " + std::to_string(var) + " out of range");
  }
}

Index LinearProgram::add_var(double objective_coeff, Bounds bounds) {
  objective_.push_back(0.0);
  bounds_.emplace_back();
  Index var = num_vars() - 1;
  set_objective(var, objective_coeff);
  set_bounds(var, bounds);
  return var;
}

void LinearProgram::set_objective(Index var, double coeff) {
  check_var(var);
  if (!std::isfinite(coeff)) throw Error("non-finite objective coefficient");
  objective_[var] = coeff;
}

void LinearProgram::set_bounds(Index var, Bounds bounds) {
  check_var(var);
  if (std::isnan(bounds.lo) || std::isnan(bounds.hi) || bounds.lo > bounds.hi ||
      bounds.lo == kInfinity || bounds.hi == -kInfinity) {
    std::ostringstream os;
    os << "invalid bounds [" << bounds.lo << ", " << bounds.hi
       << "] for variable " << var;
    throw Error(os.str());
  }
  bounds_[var] = bounds;
}

Index LinearProgram::add_row(Row row) {
  for (const Term& t : row.terms) {
    check_var(t.var);
    if (!std::isfinite(t.coeff)) throw Error("non-finite row coefficient");
  }
  if (!std::isfinite(row.rhs)) throw Error("non-finite row right-hand side");
  std::sort(row.terms.begin(), row.terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : row.terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  row.terms = std::move(merged);
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void LinearProgram::remove_row(Index r) {
  if (r < 0 || r >= num_rows()) {
    throw Error("LP row index " + std::to_string(r) + " out of range");
  }
  rows_.erase(rows_.begin() + r);
}

LinearProgram fix_variable(const LinearProgram& program, Index var, int value) {
  if (value != 0 && value != 1) throw Error("can only fix a variable to 0 or 1");
  LinearProgram out = program;
  const Bounds& b = program.bounds(var);
  if (value < b.lo || value > b.hi) {
    std::ostringstream os;
    os << "cannot fix variable " << var << " to " << value << " outside ["
       << b.lo << ", " << b.hi << "]";
    throw Error(os.str());
  }
  out.set_bounds(var, {double(value), double(value)});
  return out;
}

LinearProgram drop_row(const LinearProgram& program, Index row) {
  LinearProgram out = program;
  out.remove_row(row);
  return out;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::optimal: return "optimal";
    case Status::feasible: return "feasible";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "unknown";
}

double row_activity(const Row& row, const Vector& values) {
  double s = 0.0;
  for (const Term& t : row.terms) s += t.coeff * values(t.var);
  return s;
}

namespace {

// Working form: A x - w = 0 with one logical w_r per row carrying the row
// bounds. Variables 0..n-1 are structural, n..n+m-1 logical.
class Simplex {
 public:
  Simplex(const LinearProgram& program, const SimplexOptions& options,
          const Vector* start)
      : opt_(options),
        n_(program.num_vars()),
        m_(program.num_rows()),
        total_(n_ + m_) {
    // Column-wise copy of the constraint matrix.
    std::vector<Index> counts(static_cast<size_t>(n_), 0);
    for (const Row& row : program.rows())
      for (const Term& t : row.terms) ++counts[t.var];
    col_start_.assign(static_cast<size_t>(n_ + 1), 0);
    for (Index j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
    col_row_.resize(static_cast<size_t>(col_start_[n_]));
    col_val_.resize(static_cast<size_t>(col_start_[n_]));
    std::vector<Index> fill(col_start_.begin(), col_start_.end() - 1);
    for (Index r = 0; r < m_; ++r) {
      for (const Term& t : program.row(r).terms) {
        col_row_[fill[t.var]] = r;
        col_val_[fill[t.var]] = t.coeff;
        ++fill[t.var];
      }
    }

    lo_.resize(total_);
    hi_.resize(total_);
    cost_ = Vector::Zero(total_);
    for (Index j = 0; j < n_; ++j) {
      lo_(j) = program.bounds(j).lo;
      hi_(j) = program.bounds(j).hi;
      cost_(j) = -program.objective_coeff(j);  // minimise internally
    }
    for (Index r = 0; r < m_; ++r) {
      const Row& row = program.row(r);
      switch (row.relation) {
        case Relation::le: lo_(n_ + r) = -kInfinity; hi_(n_ + r) = row.rhs; break;
        case Relation::ge: lo_(n_ + r) = row.rhs; hi_(n_ + r) = kInfinity; break;
        case Relation::eq: lo_(n_ + r) = row.rhs; hi_(n_ + r) = row.rhs; break;
      }
    }

    x_ = Vector::Zero(total_);
    state_.assign(static_cast<size_t>(total_), NonBasic::at_lo);
    pos_.assign(static_cast<size_t>(total_), -1);
    if (start && start->size() != n_) throw Error("start point has the wrong size");
    for (Index j = 0; j < n_; ++j) {
      if (start && std::isfinite(lo_(j)) && std::isfinite(hi_(j)) &&
          std::abs((*start)(j) - hi_(j)) < std::abs((*start)(j) - lo_(j))) {
        x_(j) = hi_(j);
        state_[j] = NonBasic::at_hi;
      } else if (std::isfinite(lo_(j))) {
        x_(j) = lo_(j);
        state_[j] = NonBasic::at_lo;
      } else if (std::isfinite(hi_(j))) {
        x_(j) = hi_(j);
        state_[j] = NonBasic::at_hi;
      } else {
        x_(j) = 0.0;
        state_[j] = NonBasic::free;
      }
    }
    head_.resize(static_cast<size_t>(m_));
    for (Index r = 0; r < m_; ++r) {
      head_[r] = n_ + r;
      pos_[n_ + r] = r;
      state_[n_ + r] = NonBasic::basic;
    }
  }

  LpSolution run() {
    LpSolution sol;
    refactor();
    recompute_basics();

    int bland_streak = 0;
    bool bland = false;
    int verify_attempts = 0;
    Vector cb(m_), y(m_), alpha(m_), column(m_);

    while (true) {
      if (iterations_ >= opt_.max_iterations) {
        throw NumericalError("simplex iteration limit reached");
      }
      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
        refactor();
        recompute_basics();
      }

      // Phase selection by current basic infeasibility.
      bool phase1 = false;
      for (Index p = 0; p < m_; ++p) {
        Index j = head_[p];
        if (x_(j) < lo_(j) - opt_.feasibility_tol) {
          cb(p) = -1.0;
          phase1 = true;
        } else if (x_(j) > hi_(j) + opt_.feasibility_tol) {
          cb(p) = 1.0;
          phase1 = true;
        } else {
          cb(p) = 0.0;
        }
      }
      if (!phase1 && opt_.feasibility_only) {
        refactor();
        recompute_basics();
        if (basics_feasible()) {
          sol.status = Status::feasible;
          break;
        }
        if (++verify_attempts > 20) {
          throw NumericalError("simplex failed to stabilise at feasibility");
        }
        continue;
      }
      if (!phase1) {
        for (Index p = 0; p < m_; ++p) cb(p) = cost_(head_[p]);
      }
      btran(cb, y);

      // Pricing.
      Index enter = -1;
      int dir = 0;
      double best = 0.0;
      for (Index j = 0; j < total_; ++j) {
        NonBasic s = state_[j];
        if (s == NonBasic::basic || lo_(j) == hi_(j)) continue;
        double d = phase1 ? 0.0 : cost_(j);
        if (j < n_) {
          for (Index k = col_start_[j]; k < col_start_[j + 1]; ++k)
            d -= y(col_row_[k]) * col_val_[k];
        } else {
          d += y(j - n_);
        }
        int candidate_dir = 0;
        if ((s == NonBasic::at_lo || s == NonBasic::free) &&
            d < -opt_.optimality_tol) {
          candidate_dir = 1;
        } else if ((s == NonBasic::at_hi || s == NonBasic::free) &&
                   d > opt_.optimality_tol) {
          candidate_dir = -1;
        }
        if (candidate_dir == 0) continue;
        if (bland) {
          enter = j;
          dir = candidate_dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          dir = candidate_dir;
        }
      }

      if (enter < 0) {
        // No improving column: confirm on a fresh factorisation.
        refactor();
        recompute_basics();
        const bool feasible = basics_feasible();
        if (phase1 && !feasible) {
          sol.status = Status::infeasible;
          break;
        }
        if (!phase1 && feasible) {
          sol.status = Status::optimal;
          break;
        }
        if (++verify_attempts > 20) {
          throw NumericalError("simplex failed to stabilise at optimality");
        }
        continue;
      }

      load_column(enter, column);
      ftran(column, alpha);

      // Ratio test; x_B moves at rate -dir * alpha.
      Index leave_pos = -1;
      double theta = kInfinity;
      bool leave_to_hi = false;
      if (bland) {
        Index leave_var = -1;
        for (Index p = 0; p < m_; ++p) {
          if (std::abs(alpha(p)) <= opt_.pivot_tol) continue;
          double limit;
          bool to_hi;
          if (!ratio_limit(p, -dir * alpha(p), 0.0, limit, to_hi)) continue;
          Index j = head_[p];
          if (limit < theta - 1e-12 ||
              (limit <= theta + 1e-12 && leave_var >= 0 && j < leave_var)) {
            theta = limit;
            leave_pos = p;
            leave_var = j;
            leave_to_hi = to_hi;
          }
        }
      } else {
        // Harris two-pass: relaxed bound, then the largest pivot.
        double relaxed = kInfinity;
        for (Index p = 0; p < m_; ++p) {
          if (std::abs(alpha(p)) <= opt_.pivot_tol) continue;
          double limit;
          bool to_hi;
          if (!ratio_limit(p, -dir * alpha(p), opt_.feasibility_tol, limit, to_hi))
            continue;
          relaxed = std::min(relaxed, limit);
        }
        double best_pivot = 0.0;
        for (Index p = 0; p < m_; ++p) {
          if (std::abs(alpha(p)) <= opt_.pivot_tol) continue;
          double limit;
          bool to_hi;
          if (!ratio_limit(p, -dir * alpha(p), 0.0, limit, to_hi)) continue;
          if (limit <= relaxed && std::abs(alpha(p)) > best_pivot) {
            best_pivot = std::abs(alpha(p));
            theta = limit;
            leave_pos = p;
            leave_to_hi = to_hi;
          }
        }
      }

      double flip = (std::isfinite(lo_(enter)) && std::isfinite(hi_(enter)))
                        ? hi_(enter) - lo_(enter)
                        : kInfinity;
      ++iterations_;

      if (std::isfinite(flip) && flip <= theta) {
        // Bound flip, basis unchanged.
        double step = dir * flip;
        x_(enter) = dir > 0 ? hi_(enter) : lo_(enter);
        state_[enter] = dir > 0 ? NonBasic::at_hi : NonBasic::at_lo;
        for (Index p = 0; p < m_; ++p) x_(head_[p]) -= step * alpha(p);
        bland_streak = 0;
        bland = false;
        continue;
      }
      if (leave_pos < 0) {
        if (phase1) throw NumericalError("unbounded ray during phase 1");
        sol.status = Status::unbounded;
        break;
      }

      theta = std::max(theta, 0.0);
      double step = dir * theta;
      x_(enter) += step;
      for (Index p = 0; p < m_; ++p) x_(head_[p]) -= step * alpha(p);
      Index leave = head_[leave_pos];
      x_(leave) = leave_to_hi ? hi_(leave) : lo_(leave);
      state_[leave] = leave_to_hi ? NonBasic::at_hi : NonBasic::at_lo;
      pos_[leave] = -1;
      head_[leave_pos] = enter;
      pos_[enter] = leave_pos;
      state_[enter] = NonBasic::basic;
      etas_.push_back({leave_pos, alpha});

      if (theta * std::abs(alpha(leave_pos)) <= 1e-12) {
        if (++bland_streak >= opt_.degenerate_switch) bland = true;
      } else {
        bland_streak = 0;
        bland = false;
      }
    }

    sol.iterations = iterations_;
    sol.values = x_.head(n_);
    if (sol.status == Status::optimal || sol.status == Status::feasible) {
      for (Index j = 0; j < n_; ++j) {
        sol.values(j) = std::clamp(sol.values(j), lo_(j), hi_(j));
      }
      sol.objective = -cost_.head(n_).dot(sol.values);
    }
    return sol;
  }

 private:
  enum class NonBasic : unsigned char { at_lo, at_hi, free, basic };

  struct Eta {
    Index r;
    Vector d;
  };

  bool basics_feasible() const {
    for (Index p = 0; p < m_; ++p) {
      Index j = head_[p];
      if (x_(j) < lo_(j) - opt_.feasibility_tol || x_(j) > hi_(j) + opt_.feasibility_tol)
        return false;
    }
    return true;
  }

  // Step length until basic p reaches a bound when moving at `rate`.
  // Infeasible basics block where they become feasible.
  bool ratio_limit(Index p, double rate, double tol, double& limit,
                   bool& to_hi) const {
    Index j = head_[p];
    double v = x_(j);
    if (rate > 0.0) {
      if (v < lo_(j) - opt_.feasibility_tol) {
        limit = (lo_(j) - v + tol) / rate;
        to_hi = false;
        return true;
      }
      if (!std::isfinite(hi_(j))) return false;
      limit = std::max(0.0, hi_(j) - v + tol) / rate;
      to_hi = true;
      return true;
    }
    if (v > hi_(j) + opt_.feasibility_tol) {
      limit = (v - hi_(j) + tol) / -rate;
      to_hi = true;
      return true;
    }
    if (!std::isfinite(lo_(j))) return false;
    limit = std::max(0.0, v - lo_(j) + tol) / -rate;
    to_hi = false;
    return true;
  }

  void load_column(Index j, Vector& column) const {
    column.setZero();
    if (j < n_) {
      for (Index k = col_start_[j]; k < col_start_[j + 1]; ++k)
        column(col_row_[k]) = col_val_[k];
    } else {
      column(j - n_) = -1.0;
    }
  }

  void refactor() {
    etas_.clear();
    if (m_ == 0) return;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(m_ * 3));
    for (Index p = 0; p < m_; ++p) {
      Index j = head_[p];
      if (j < n_) {
        for (Index k = col_start_[j]; k < col_start_[j + 1]; ++k)
          triplets.emplace_back(col_row_[k], p, col_val_[k]);
      } else {
        triplets.emplace_back(j - n_, p, -1.0);
      }
    }
    Eigen::SparseMatrix<double> basis(m_, m_);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    if (lu_.info() != Eigen::Success) {
      throw NumericalError("singular simplex basis: " + lu_.lastErrorMessage());
    }
  }

  void recompute_basics() {
    if (m_ == 0) return;
    Vector rhs = Vector::Zero(m_);
    for (Index j = 0; j < total_; ++j) {
      if (state_[j] == NonBasic::basic || x_(j) == 0.0) continue;
      if (j < n_) {
        for (Index k = col_start_[j]; k < col_start_[j + 1]; ++k)
          rhs(col_row_[k]) -= col_val_[k] * x_(j);
      } else {
        rhs(j - n_) += x_(j);
      }
    }
    Vector xb(m_);
    ftran(rhs, xb);
    for (Index p = 0; p < m_; ++p) x_(head_[p]) = xb(p);
  }

  void ftran(const Vector& a, Vector& out) const {
    if (m_ == 0) return;
    out = lu_.solve(a);
    for (const Eta& e : etas_) {
      double vr = out(e.r) / e.d(e.r);
      out -= vr * e.d;
      out(e.r) = vr;
    }
  }

  void btran(const Vector& c, Vector& y) const {
    if (m_ == 0) return;
    Vector w = c;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double wr = w(it->r);
      double dot = w.dot(it->d) - wr * it->d(it->r);
      w(it->r) = (wr - dot) / it->d(it->r);
    }
    y = lu_.transpose().solve(w);
  }

  SimplexOptions opt_;
  Index n_, m_, total_;
  std::vector<Index> col_start_, col_row_;
  std::vector<double> col_val_;
  Vector lo_, hi_, cost_, x_;
  std::vector<NonBasic> state_;
  std::vector<Index> head_, pos_;
  std::vector<Eta> etas_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  long iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& program, const SimplexOptions& options,
                    const Vector* start) {
  Simplex simplex(program, options, start);
  return simplex.run();
}

VertexCheck check_vertex(const LinearProgram& program, const Vector& values) {
  VertexCheck out;
  std::vector<Index> frac_index(static_cast<size_t>(program.num_vars()), -1);
  for (Index j = 0; j < program.num_vars(); ++j) {
    const Bounds& b = program.bounds(j);
    double v = values(j);
    if (v > b.lo + kTightTol && v < b.hi - kTightTol) {
      frac_index[j] = out.fractional++;
    }
  }
  std::vector<Index> tight;
  for (Index r = 0; r < program.num_rows(); ++r) {
    const Row& row = program.row(r);
    if (std::abs(row_activity(row, values) - row.rhs) <= kTightTol) {
      tight.push_back(r);
    }
  }
  out.tight_rows = static_cast<Index>(tight.size());
  if (out.fractional == 0 || tight.empty()) return out;

  Matrix sub = Matrix::Zero(static_cast<Index>(tight.size()), out.fractional);
  for (size_t k = 0; k < tight.size(); ++k) {
    for (const Term& t : program.row(tight[k]).terms) {
      if (frac_index[t.var] >= 0) sub(static_cast<Index>(k), frac_index[t.var]) = t.coeff;
    }
  }
  Eigen::FullPivLU<Matrix> lu(sub);
  lu.setThreshold(1e-9);
  out.tight_rank = lu.rank();
  return out;
}

double max_violation(const LinearProgram& program, const Vector& values) {
  double worst = 0.0;
  for (Index j = 0; j < program.num_vars(); ++j) {
    const Bounds& b = program.bounds(j);
    worst = std::max({worst, b.lo - values(j), values(j) - b.hi});
  }
  for (const Row& row : program.rows()) {
    double a = row_activity(row, values);
    switch (row.relation) {
      case Relation::le: worst = std::max(worst, a - row.rhs); break;
      case Relation::ge: worst = std::max(worst, row.rhs - a); break;
      case Relation::eq: worst = std::max(worst, std::abs(a - row.rhs)); break;
    }
  }
  return worst;
}

void write_lp_format(const LinearProgram& program, std::ostream& out) {
  auto name_of_row = [](const Row& row, Index r) {
    return row.name.empty() ? "r" + std::to_string(r) : row.name;
  };
  auto write_terms = [&out](const auto& terms) {
    bool first = true;
    for (const auto& [var, coeff] : terms) {
      if (coeff < 0) {
        out << (first ? "-" : " - ");
      } else if (!first) {
        out << " + ";
      }
      out << std::abs(coeff) << " x" << var;
      first = false;
    }
    if (first) out << "0 x0";
  };
  out.precision(17);
  out << "Maximize\n obj: ";
  std::vector<std::pair<Index, double>> obj;
  for (Index j = 0; j < program.num_vars(); ++j) {
    if (program.objective_coeff(j) != 0.0) obj.emplace_back(j, program.objective_coeff(j));
  }
  write_terms(obj);
  out << "\nSubject To\n";
  for (Index r = 0; r < program.num_rows(); ++r) {
    const Row& row = program.row(r);
    std::vector<std::pair<Index, double>> terms;
    for (const Term& t : row.terms) terms.emplace_back(t.var, t.coeff);
    out << " " << name_of_row(row, r) << ": ";
    write_terms(terms);
    switch (row.relation) {
      case Relation::le: out << " <= "; break;
      case Relation::ge: out << " >= "; break;
      case Relation::eq: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (Index j = 0; j < program.num_vars(); ++j) {
    const Bounds& b = program.bounds(j);
    if (b.lo == b.hi) {
      out << " x" << j << " = " << b.lo << "\n";
      continue;
    }
    out << " ";
    if (std::isfinite(b.lo)) out << b.lo; else out << "-inf";
    out << " <= x" << j << " <= ";
    if (std::isfinite(b.hi)) out << b.hi; else out << "+inf";
    out << "\n";
  }
  out << "End\n";
}

}  // namespace fairmatch::lp
