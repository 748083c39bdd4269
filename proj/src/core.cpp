#include "fairmatch/core.hpp"

#include <cmath>
#include <sstream>

namespace fairmatch {

namespace {

void require_nonnegative(const Counts& counts, const char* what) {
  for (Index k = 0; k < counts.size(); ++k) {
    if (counts(k) < 0) {
      std::ostringstream os;
      os << what << "[" << k << "] is negative (" << counts(k) << ")";
      throw Error(os.str());
    }
  }
}

}  // namespace

Instance::Instance(Matrix affinity, Counts load_ub, Counts coverage,
                   std::optional<Counts> load_lb)
    : affinity_(std::move(affinity)),
      load_ub_(std::move(load_ub)),
      coverage_(std::move(coverage)),
      load_lb_(std::move(load_lb)) {
  if (load_ub_.size() != affinity_.rows()) {
    throw Error("load_ub has " + std::to_string(load_ub_.size()) +
                " entries, expected " + std::to_string(affinity_.rows()));
  }
  if (coverage_.size() != affinity_.cols()) {
    throw Error("coverage has " + std::to_string(coverage_.size()) +
                " entries, expected " + std::to_string(affinity_.cols()));
  }
  if (load_lb_ && load_lb_->size() != affinity_.rows()) {
    throw Error("load_lb has " + std::to_string(load_lb_->size()) +
                " entries, expected " + std::to_string(affinity_.rows()));
  }
  if (!affinity_.allFinite()) throw Error("affinity matrix is not finite");
  require_nonnegative(load_ub_, "load_ub");
  require_nonnegative(coverage_, "coverage");
  if (load_lb_) require_nonnegative(*load_lb_, "load_lb");
  a_max_ = affinity_.size() > 0 ? affinity_.maxCoeff() : 0.0;
}

Counts Instance::load_lb() const {
  return load_lb_ ? *load_lb_ : Counts::Zero(num_reviewers());
}

Instance Instance::without_load_lb() const {
  return Instance(affinity_, load_ub_, coverage_);
}

bool Instance::operator==(const Instance& other) const {
  return affinity_.rows() == other.affinity_.rows() &&
         affinity_.cols() == other.affinity_.cols() &&
         affinity_ == other.affinity_ && load_ub_ == other.load_ub_ &&
         coverage_ == other.coverage_ && load_lb_ == other.load_lb_;
}

Matching::Matching(Matrix values) : values_(std::move(values)) {
  for (Index j = 0; j < values_.cols(); ++j) {
    for (Index i = 0; i < values_.rows(); ++i) {
      double v = values_(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << "matching value x(" << i << "," << j << ") = " << v
           << " outside [0,1]";
        throw Error(os.str());
      }
      if (v != 0.0 && v != 1.0) integral_ = false;
    }
  }
}

Matching Matching::zeros(Index num_reviewers, Index num_papers) {
  return Matching(Matrix::Zero(num_reviewers, num_papers));
}

void Matching::assign(Index reviewer, Index paper) {
  if (!integral_) throw Error("assign() on a fractional matching");
  values_(reviewer, paper) = 1.0;
}

void Matching::unassign(Index reviewer, Index paper) {
  if (!integral_) throw Error("unassign() on a fractional matching");
  values_(reviewer, paper) = 0.0;
}

Counts Matching::loads() const {
  return values_.rowwise().sum().array().round().cast<int>();
}

Counts Matching::coverage() const {
  return values_.colwise().sum().transpose().array().round().cast<int>();
}

std::vector<Index> Matching::reviewers_of(Index paper) const {
  std::vector<Index> out;
  for (Index i = 0; i < values_.rows(); ++i)
    if (values_(i, paper) == 1.0) out.push_back(i);
  return out;
}

std::vector<Index> Matching::papers_of(Index reviewer) const {
  std::vector<Index> out;
  for (Index j = 0; j < values_.cols(); ++j)
    if (values_(reviewer, j) == 1.0) out.push_back(j);
  return out;
}

Index Matching::size() const {
  return static_cast<Index>(std::llround(values_.sum()));
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::coverage: return "coverage";
    case Violation::Kind::load_ub: return "load_ub";
    case Violation::Kind::load_lb: return "load_lb";
    case Violation::Kind::fairness: return "fairness";
  }
  return "unknown";
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  bool on_paper = v.kind == Violation::Kind::coverage ||
                  v.kind == Violation::Kind::fairness;
  os << to_string(v.kind) << " violated at " << (on_paper ? "paper " : "reviewer ")
     << v.subject << " by " << v.amount;
  return os.str();
}

void check_shapes(const Instance& instance, const Matching& matching) {
  if (matching.num_reviewers() != instance.num_reviewers() ||
      matching.num_papers() != instance.num_papers()) {
    std::ostringstream os;
    os << "matching is " << matching.num_reviewers() << "x"
       << matching.num_papers() << " but instance is "
       << instance.num_reviewers() << "x" << instance.num_papers();
    throw Error(os.str());
  }
}

double paper_score(const Instance& instance, const Matching& matching,
                   Index paper) {
  check_shapes(instance, matching);
  if (paper < 0 || paper >= instance.num_papers()) {
    throw Error("paper index " + std::to_string(paper) + " out of range");
  }
  return instance.affinity().col(paper).dot(matching.values().col(paper));
}

Vector paper_scores(const Instance& instance, const Matching& matching) {
  check_shapes(instance, matching);
  return paper_scores(instance.affinity(), matching.values());
}

double objective(const Instance& instance, const Matching& matching) {
  check_shapes(instance, matching);
  return instance.affinity().cwiseProduct(matching.values()).sum();
}

std::vector<Violation> validate(const Instance& instance,
                                const Matching& matching,
                                const ValidateOptions& options) {
  check_shapes(instance, matching);
  if (!matching.integral()) throw Error("validate() needs an integral matching");

  std::vector<Violation> out;
  const Counts cover = matching.coverage();
  for (Index j = 0; j < instance.num_papers(); ++j) {
    int diff = cover(j) - instance.coverage()(j);
    if (diff != 0) {
      out.push_back({Violation::Kind::coverage, j, double(std::abs(diff))});
    }
  }
  const Counts load = matching.loads();
  const Counts lb = instance.load_lb();
  for (Index i = 0; i < instance.num_reviewers(); ++i) {
    int over = load(i) - (instance.load_ub()(i) + options.load_slack);
    if (over > 0) out.push_back({Violation::Kind::load_ub, i, double(over)});
    int under = (lb(i) - options.load_slack) - load(i);
    if (under > 0) out.push_back({Violation::Kind::load_lb, i, double(under)});
  }
  if (options.fairness_threshold) {
    const double floor = *options.fairness_threshold - options.fairness_slack;
    const Vector scores = paper_scores(instance, matching);
    for (Index j = 0; j < scores.size(); ++j) {
      if (scores(j) < floor - kScoreTol) {
        out.push_back({Violation::Kind::fairness, j, floor - scores(j)});
      }
    }
  }
  return out;
}

Feasibility feasibility_precheck(const Instance& instance) {
  Feasibility f;
  const long long total_ub = instance.load_ub().cast<long long>().sum();
  const long long total_cov = instance.coverage().cast<long long>().sum();
  if (total_ub < total_cov) {
    f.ok = false;
    f.capacity_deficit = total_cov - total_ub;
    f.reason = "capacity deficit " + std::to_string(f.capacity_deficit) +
               ": sum of load upper bounds " + std::to_string(total_ub) +
               " < sum of coverage " + std::to_string(total_cov);
    return f;
  }
  if (instance.has_load_lb()) {
    const Counts lb = instance.load_lb();
    for (Index i = 0; i < instance.num_reviewers(); ++i) {
      if (lb(i) > instance.load_ub()(i)) {
        f.ok = false;
        f.reason = "inverted bounds at reviewer " + std::to_string(i) +
                   ": load_lb " + std::to_string(lb(i)) + " > load_ub " +
                   std::to_string(instance.load_ub()(i));
        return f;
      }
    }
    const long long total_lb = lb.cast<long long>().sum();
    if (total_lb > total_cov) {
      f.ok = false;
      f.reason = "sum of load lower bounds " + std::to_string(total_lb) +
                 " exceeds sum of coverage " + std::to_string(total_cov);
      return f;
    }
  }
  for (Index j = 0; j < instance.num_papers(); ++j) {
    if (instance.coverage()(j) > instance.num_reviewers()) {
      f.ok = false;
      f.reason = "paper " + std::to_string(j) + " needs " +
                 std::to_string(instance.coverage()(j)) +
                 " reviewers but only " +
                 std::to_string(instance.num_reviewers()) + " exist";
      return f;
    }
  }
  return f;
}

void require_feasible(const Instance& instance) {
  Feasibility f = feasibility_precheck(instance);
  if (!f) throw Error("infeasible instance: " + f.reason);
}

}  // namespace fairmatch
