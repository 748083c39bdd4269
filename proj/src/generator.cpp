#include "fairmatch/generator.hpp"

#include <cmath>

namespace fairmatch {

std::string to_string(AffinityModel model) {
  switch (model) {
    case AffinityModel::uniform: return "uniform";
    case AffinityModel::block_expert: return "block-expert";
    case AffinityModel::midl_like: return "midl-like";
    case AffinityModel::cvpr_like: return "cvpr-like";
    case AffinityModel::cvpr18_like: return "cvpr18-like";
  }
  return "?";
}

AffinityModel parse_affinity_model(const std::string& name) {
  for (auto m : {AffinityModel::uniform, AffinityModel::block_expert,
                 AffinityModel::midl_like, AffinityModel::cvpr_like,
                 AffinityModel::cvpr18_like}) {
    if (to_string(m) == name) return m;
  }
  throw Error("unknown affinity model '" + name + "'");
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::exponential(double mean) { return -mean * std::log1p(-uniform()); }

GeneratorSpec preset(AffinityModel model, std::uint64_t seed) {
  GeneratorSpec s;
  s.model = model;
  s.seed = seed;
  switch (model) {
    case AffinityModel::midl_like:
      s.num_reviewers = 177;
      s.num_papers = 118;
      s.coverage = 3;
      s.load_ub = 4;
      s.load_lb = 2;
      s.lo = -1.0;
      s.hi = 1.0;
      break;
    case AffinityModel::cvpr_like:
      s.num_reviewers = 1373;
      s.num_papers = 2623;
      s.coverage = 3;
      s.load_ub = 6;
      break;
    case AffinityModel::cvpr18_like:
      s.num_reviewers = 2840;
      s.num_papers = 5062;
      s.coverage = 3;
      s.load_ub = 9;
      s.lo = 0.0;
      s.hi = 11.1;
      break;
    default:
      break;
  }
  return s;
}

namespace {

constexpr double kCvpr18Mean = 0.36;
constexpr double kCvpr18Cap = 11.1;

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  if (spec.num_reviewers < 0 || spec.num_papers < 0) throw Error("negative dimensions");
  if (spec.coverage < 0 || spec.load_ub < 0 || (spec.load_lb && *spec.load_lb < 0)) {
    throw Error("negative coverage or load bound");
  }
  if (spec.hi < spec.lo) throw Error("affinity range is inverted");
  const Index nr = spec.num_reviewers;
  const Index np = spec.num_papers;
  Rng rng(spec.seed);
  Matrix a(nr, np);
  Counts ub = Counts::Constant(nr, spec.load_ub);

  switch (spec.model) {
    case AffinityModel::uniform:
    case AffinityModel::midl_like:
    case AffinityModel::cvpr_like:
      for (Index i = 0; i < nr; ++i)
        for (Index j = 0; j < np; ++j) a(i, j) = rng.uniform(spec.lo, spec.hi);
      break;
    case AffinityModel::block_expert: {
      if (spec.topics < 1 || spec.experts_per_topic < 0) throw Error("bad topic layout");
      Eigen::VectorXi paper_topic(np);
      for (Index j = 0; j < np; ++j) paper_topic(j) = static_cast<int>(rng.integer(0, spec.topics - 1));
      const Index experts = std::min<Index>(nr, Index{spec.topics} * spec.experts_per_topic);
      for (Index i = 0; i < nr; ++i) {
        for (Index j = 0; j < np; ++j) {
          const bool expert = i < experts && i % spec.topics == paper_topic(j);
          a(i, j) = expert ? rng.uniform(0.8, 1.0) : rng.uniform(0.0, 0.2);
        }
      }
      break;
    }
    case AffinityModel::cvpr18_like: {
      for (Index i = 0; i < nr; ++i)
        for (Index j = 0; j < np; ++j)
          a(i, j) = std::min(rng.exponential(kCvpr18Mean), kCvpr18Cap);
      for (Index i = 0; i < nr; ++i) ub(i) = static_cast<int>(rng.integer(2, 9));
      const long long need = static_cast<long long>(spec.coverage) * np;
      // Raise loads round-robin until total capacity covers every paper.
      for (Index i = 0; nr > 0 && ub.cast<long long>().sum() < need; i = (i + 1) % nr) {
        bool room = (ub.array() < 9).any();
        if (!room) break;
        if (ub(i) < 9) ++ub(i);
      }
      break;
    }
  }

  std::optional<Counts> lb;
  if (spec.load_lb) lb = Counts::Constant(nr, *spec.load_lb);
  Instance inst(std::move(a), std::move(ub), Counts::Constant(np, spec.coverage),
                std::move(lb));
  Feasibility f = feasibility_precheck(inst);
  if (!f) throw Error("inconsistent generator spec: " + f.reason);
  return inst;
}

}  // namespace fairmatch
