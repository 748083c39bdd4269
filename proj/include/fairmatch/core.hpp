#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairmatch {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Counts = Eigen::VectorXi;

/// Absolute tolerance for every paper-score comparison.
inline constexpr double kScoreTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reviewer assignment problem: affinities (reviewers x papers), reviewer
/// load bounds and per-paper coverage.
///
/// Load lower bounds are optional; an absent vector behaves as all zeros.
/// Inverted bounds (L_i > U_i) are representable so that
/// feasibility_precheck() can report them.
class Instance {
 public:
  Instance() = default;
  Instance(Matrix affinity, Counts load_ub, Counts coverage,
           std::optional<Counts> load_lb = std::nullopt);

  Index num_reviewers() const { return affinity_.rows(); }
  Index num_papers() const { return affinity_.cols(); }

  const Matrix& affinity() const { return affinity_; }
  double affinity(Index reviewer, Index paper) const {
    return affinity_(reviewer, paper);
  }
  const Counts& load_ub() const { return load_ub_; }
  const Counts& coverage() const { return coverage_; }
  bool has_load_lb() const { return load_lb_.has_value(); }
  const std::optional<Counts>& load_lb_opt() const { return load_lb_; }
  /// Lower bounds, zeros when absent.
  Counts load_lb() const;

  /// Largest affinity over the whole matrix (0 for an empty matrix).
  double a_max() const { return a_max_; }

  /// Same instance with the lower bounds removed.
  Instance without_load_lb() const;

  bool operator==(const Instance& other) const;

 private:
  Matrix affinity_;
  Counts load_ub_;
  Counts coverage_;
  std::optional<Counts> load_lb_;
  double a_max_ = 0.0;
};

/// Reviewer-paper assignment values x_ij in [0, 1].
class Matching {
 public:
  Matching() = default;
  explicit Matching(Matrix values);

  static Matching zeros(Index num_reviewers, Index num_papers);

  Index num_reviewers() const { return values_.rows(); }
  Index num_papers() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  double operator()(Index reviewer, Index paper) const {
    return values_(reviewer, paper);
  }

  /// True when every value is exactly 0 or 1.
  bool integral() const { return integral_; }
  bool assigned(Index reviewer, Index paper) const {
    return values_(reviewer, paper) == 1.0;
  }

  // Mutators keep the matching integral; they are meant for solvers that own
  // their working copy.
  void assign(Index reviewer, Index paper);
  void unassign(Index reviewer, Index paper);

  /// Row sums (papers per reviewer), rounded.
  Counts loads() const;
  /// Column sums (reviewers per paper), rounded.
  Counts coverage() const;

  std::vector<Index> reviewers_of(Index paper) const;
  std::vector<Index> papers_of(Index reviewer) const;

  /// Number of assigned pairs.
  Index size() const;

  bool operator==(const Matching& other) const {
    return values_ == other.values_;
  }

 private:
  Matrix values_;
  bool integral_ = true;
};

struct Violation {
  enum class Kind { coverage, load_ub, load_lb, fairness };
  Kind kind;
  Index subject;  // paper for coverage/fairness, reviewer for loads
  double amount;  // always > 0
};

std::string to_string(Violation::Kind kind);
std::string describe(const Violation& violation);

/// Paper score: sum of affinities of the reviewers assigned to `paper`.
double paper_score(const Instance& instance, const Matching& matching,
                   Index paper);

/// All paper scores at once.
template <typename DerivedA, typename DerivedX>
Vector paper_scores(const Eigen::MatrixBase<DerivedA>& affinity,
                    const Eigen::MatrixBase<DerivedX>& x) {
  return affinity.cwiseProduct(x).colwise().sum().transpose();
}

Vector paper_scores(const Instance& instance, const Matching& matching);

/// Sum of x_ij * A_ij.
double objective(const Instance& instance, const Matching& matching);

struct ValidateOptions {
  int load_slack = 0;
  std::optional<double> fairness_threshold;
  double fairness_slack = 0.0;
};

/// Reports every constraint of the slack-relaxed program that `matching`
/// breaks. An empty result means the matching is admissible.
std::vector<Violation> validate(const Instance& instance,
                                const Matching& matching,
                                const ValidateOptions& options = {});

struct Feasibility {
  bool ok = true;
  std::string reason;
  /// sum(C) - sum(U) when positive, else 0.
  long long capacity_deficit = 0;

  explicit operator bool() const { return ok; }
};

/// Cheap necessary conditions: enough total capacity, non-inverted load
/// bounds, no paper needing more reviewers than exist, sum(L) <= sum(C).
Feasibility feasibility_precheck(const Instance& instance);

/// Throws Error with the precheck reason when the instance fails it.
void require_feasible(const Instance& instance);

void check_shapes(const Instance& instance, const Matching& matching);

}  // namespace fairmatch
