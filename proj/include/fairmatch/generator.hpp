#pragma once

#include "fairmatch/core.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace fairmatch {

enum class AffinityModel { uniform, block_expert, midl_like, cvpr_like, cvpr18_like };

std::string to_string(AffinityModel model);
AffinityModel parse_affinity_model(const std::string& name);

struct GeneratorSpec {
  Index num_reviewers = 0;
  Index num_papers = 0;
  int coverage = 1;
  int load_ub = 1;
  std::optional<int> load_lb;
  AffinityModel model = AffinityModel::uniform;
  double lo = 0.0;  // uniform range
  double hi = 1.0;
  int topics = 4;             // block_expert
  int experts_per_topic = 2;  // block_expert
  std::uint64_t seed = 0;
};

/// Conference-scale defaults for the *_like models (dimensions, coverage,
/// loads); other models keep `spec` unchanged.
GeneratorSpec preset(AffinityModel model, std::uint64_t seed = 0);

/// Deterministic instance for a fixed seed. The cvpr18-like model draws
/// per-reviewer upper bounds from {2..9} and ignores spec.load_ub. Throws
/// Error when the result fails the feasibility precheck.
Instance generate(const GeneratorSpec& spec);

/// Uniform reals and integers on top of mt19937_64 with a fixed, portable
/// mapping.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// [0, 1)
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// [lo, hi]
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  double exponential(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairmatch
