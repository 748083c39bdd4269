#include "fairmatch/oracle.hpp"

#include <limits>

namespace fairmatch::oracle {

double search_space_size(const Instance& instance) {
  double total = 1.0;
  const double n = static_cast<double>(instance.num_reviewers());
  for (Index j = 0; j < instance.num_papers(); ++j) {
    const int c = instance.coverage()(j);
    double binom = 1.0;
    for (int k = 0; k < c; ++k) binom = binom * (n - k) / (k + 1);
    total *= std::max(binom, 0.0);
  }
  return total;
}

namespace {

class Enumerator {
 public:
  Enumerator(const Instance& instance, const std::function<void(const Matching&)>& visit)
      : inst_(instance),
        visit_(visit),
        lb_(instance.load_lb()),
        load_(Counts::Zero(instance.num_reviewers())),
        current_(Matching::zeros(instance.num_reviewers(), instance.num_papers())) {
    remaining_cov_ = instance.coverage().cast<long long>().sum();
  }

  std::size_t run() {
    paper(0);
    return count_;
  }

 private:
  long long lower_bound_gap() const {
    long long gap = 0;
    for (Index i = 0; i < inst_.num_reviewers(); ++i)
      if (load_(i) < lb_(i)) gap += lb_(i) - load_(i);
    return gap;
  }

  void paper(Index j) {
    if (lower_bound_gap() > remaining_cov_) return;
    if (j == inst_.num_papers()) {
      if (lower_bound_gap() == 0) {
        ++count_;
        visit_(current_);
      }
      return;
    }
    pick(j, 0, inst_.coverage()(j));
  }

  // Chooses `left` more reviewers for paper j from index `from` upward.
  void pick(Index j, Index from, int left) {
    if (left == 0) {
      paper(j + 1);
      return;
    }
    for (Index i = from; i + left <= inst_.num_reviewers(); ++i) {
      if (load_(i) >= inst_.load_ub()(i)) continue;
      ++load_(i);
      --remaining_cov_;
      current_.assign(i, j);
      pick(j, i + 1, left - 1);
      current_.unassign(i, j);
      ++remaining_cov_;
      --load_(i);
    }
  }

  const Instance& inst_;
  const std::function<void(const Matching&)>& visit_;
  Counts lb_;
  Counts load_;
  Matching current_;
  long long remaining_cov_ = 0;
  std::size_t count_ = 0;
};

}  // namespace

std::size_t for_each_matching(const Instance& instance,
                              const std::function<void(const Matching&)>& visit) {
  const double space = search_space_size(instance);
  if (space > kMaxSearchSpace) {
    throw Error("oracle search space too large (" + std::to_string(space) + " > 1e7)");
  }
  Enumerator e(instance, visit);
  return e.run();
}

std::vector<Matching> enumerate_matchings(const Instance& instance) {
  std::vector<Matching> out;
  for_each_matching(instance, [&out](const Matching& m) { out.push_back(m); });
  return out;
}

Best brute_force_optimal(const Instance& instance) {
  std::optional<Best> best;
  for_each_matching(instance, [&](const Matching& m) {
    double v = objective(instance, m);
    if (!best || v > best->value) best = Best{v, m};
  });
  if (!best) throw Error("instance admits no matching");
  return *best;
}

std::optional<Best> brute_force_optimal_fair(const Instance& instance,
                                             double threshold) {
  std::optional<Best> best;
  for_each_matching(instance, [&](const Matching& m) {
    Vector scores = paper_scores(instance, m);
    if (scores.size() > 0 && scores.minCoeff() < threshold - kScoreTol) return;
    double v = objective(instance, m);
    if (!best || v > best->value) best = Best{v, m};
  });
  return best;
}

Best brute_force_maximin(const Instance& instance) {
  std::optional<Best> best;
  for_each_matching(instance, [&](const Matching& m) {
    Vector scores = paper_scores(instance, m);
    double v = scores.size() > 0 ? scores.minCoeff()
                                 : std::numeric_limits<double>::infinity();
    if (!best || v > best->value) best = Best{v, m};
  });
  if (!best) throw Error("instance admits no matching");
  return *best;
}

}  // namespace fairmatch::oracle
