#include "fairmatch/cli.hpp"

#include "fairmatch/fairflow.hpp"
#include "fairmatch/fairir.hpp"
#include "fairmatch/generator.hpp"
#include "fairmatch/io.hpp"
#include "fairmatch/log.hpp"
#include "fairmatch/metrics.hpp"
#include "fairmatch/oracle.hpp"
#include "fairmatch/threshold.hpp"
#include "fairmatch/tpms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ostream>

namespace fairmatch {

namespace {

using nlohmann::json;

struct SolveArgs {
  std::string instance;
  std::string alg = "tpms";
  std::string t = "auto";
  std::string lb = "on";
  std::string output;
  std::string stats;
  int iterations = 10;
  bool timing = false;
};

Instance load(const std::string& path, const std::string& lb) {
  Instance inst = io::read_instance(path);
  return lb == "off" ? inst.without_load_lb() : inst;
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(what + ": '" + text + "' is not a number");
}

struct Solved {
  Matching matching;
  double t = 0.0;
  double seconds = 0.0;
};

Solved solve(const Instance& inst, const std::string& alg, const std::string& t_arg,
             int iterations) {
  const auto start = std::chrono::steady_clock::now();
  Solved s;
  if (alg == "tpms") {
    s.matching = solve_assignment(inst);
  } else if (alg == "fairir") {
    if (t_arg == "auto") {
      s.t = search_t_fairir(inst, iterations).t_star;
    } else if (t_arg == "heuristic") {
      s.t = heuristic_t(inst);
    } else {
      s.t = parse_real(t_arg, "--t");
    }
    s.matching = solve_fairir(inst, s.t).matching;
  } else if (alg == "fairflow") {
    if (t_arg == "auto") {
      ThresholdSearchResult r = search_t_fairflow(inst, iterations);
      s.t = r.t_star;
      s.matching = std::move(*r.best_matching);
    } else {
      s.t = t_arg == "heuristic" ? heuristic_t(inst) : parse_real(t_arg, "--t");
      s.matching = solve_fairflow(inst, s.t).matching;
    }
  } else {
    throw Error("unknown algorithm '" + alg + "'");
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::atomic_write(path, text);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reviewer assignment with local fairness constraints", "fairmatch"};
  app.require_subcommand(1);
  std::string log_level;
  app.add_option("--log", log_level, "trace level: off, info, debug (default from FAIRMATCH_LOG)");

  // generate
  auto* gen = app.add_subcommand("generate", "write a seeded synthetic instance");
  GeneratorSpec gspec;
  std::string model = "uniform";
  std::string gen_out;
  bool gen_tsv = false;
  std::optional<Index> g_reviewers, g_papers;
  std::optional<int> g_cov, g_ub, g_lb;
  std::optional<double> g_lo, g_hi;
  bool g_no_lb = false;
  gen->add_option("--model", model,
                  "uniform, block-expert, midl-like, cvpr-like, cvpr18-like");
  gen->add_option("--reviewers", g_reviewers);
  gen->add_option("--papers", g_papers);
  gen->add_option("--coverage", g_cov);
  gen->add_option("--load-ub", g_ub);
  gen->add_option("--load-lb", g_lb);
  gen->add_flag("--no-load-lb", g_no_lb, "drop the preset lower bounds");
  gen->add_option("--lo", g_lo);
  gen->add_option("--hi", g_hi);
  gen->add_option("--topics", gspec.topics);
  gen->add_option("--experts", gspec.experts_per_topic, "experts per topic");
  gen->add_option("--seed", gspec.seed);
  gen->add_option("-o,--output", gen_out, "instance JSON path")->required();
  gen->add_flag("--tsv", gen_tsv, "store affinities in a sibling TSV file");

  // solve
  auto* sol = app.add_subcommand("solve", "compute a matching");
  SolveArgs sargs;
  sol->add_option("instance", sargs.instance)->required();
  sol->add_option("--alg", sargs.alg)->check(CLI::IsMember({"tpms", "fairir", "fairflow"}));
  sol->add_option("--t", sargs.t, "threshold: a number, auto or heuristic");
  sol->add_option("--lb", sargs.lb, "use load lower bounds")->check(CLI::IsMember({"on", "off"}));
  sol->add_option("--iterations", sargs.iterations, "binary search steps for --t auto");
  sol->add_option("-o,--output", sargs.output, "matching CSV path (default stdout)");
  sol->add_option("--stats", sargs.stats, "stats JSON path");
  sol->add_flag("--timing", sargs.timing, "record wall time in the stats");

  // search-t
  auto* srch = app.add_subcommand("search-t", "binary search for a fairness threshold");
  std::string s_instance, s_alg = "fairir", s_lb = "on", s_out;
  int s_iterations = 10;
  std::optional<double> s_budget;
  srch->add_option("instance", s_instance)->required();
  srch->add_option("--alg", s_alg)->check(CLI::IsMember({"fairir", "fairflow"}));
  srch->add_option("--lb", s_lb)->check(CLI::IsMember({"on", "off"}));
  srch->add_option("--iterations", s_iterations);
  srch->add_option("--budget", s_budget, "wall-clock seconds (fairflow)");
  srch->add_option("-o,--output", s_out, "result JSON path (default stdout)");

  // stats / profile / verify share instance + matching
  std::string m_instance, m_matching, m_out;
  auto* st = app.add_subcommand("stats", "summary statistics of a matching");
  auto* pr = app.add_subcommand("profile", "quintile profile of the paper scores");
  auto* ver = app.add_subcommand("verify", "check a matching against the constraints");
  for (auto* sub : {st, pr, ver}) {
    sub->add_option("instance", m_instance)->required();
    sub->add_option("matching", m_matching)->required();
  }
  for (auto* sub : {st, pr}) sub->add_option("-o,--output", m_out);
  int v_slack = 0;
  std::optional<double> v_t;
  double v_fslack = 0.0;
  ver->add_option("--load-slack", v_slack);
  ver->add_option("--t", v_t, "fairness threshold");
  ver->add_option("--fairness-slack", v_fslack);

  // bench
  auto* bench = app.add_subcommand("bench", "run every algorithm and emit table rows");
  std::string b_instance, b_data, b_out, b_lb = "on";
  int b_iterations = 10;
  bench->add_option("instance", b_instance)->required();
  bench->add_option("--data", b_data, "value of the Data column (default: file stem)");
  bench->add_option("--lb", b_lb)->check(CLI::IsMember({"on", "off"}));
  bench->add_option("--iterations", b_iterations);
  bench->add_option("-o,--output", b_out, "CSV path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (!log_level.empty()) log::set_level(log::parse_level(log_level));

    if (*gen) {
      AffinityModel m = parse_affinity_model(model);
      GeneratorSpec spec = preset(m, gspec.seed);
      spec.topics = gspec.topics;
      spec.experts_per_topic = gspec.experts_per_topic;
      if (g_reviewers) spec.num_reviewers = *g_reviewers;
      if (g_papers) spec.num_papers = *g_papers;
      if (g_cov) spec.coverage = *g_cov;
      if (g_ub) spec.load_ub = *g_ub;
      if (g_lb) spec.load_lb = *g_lb;
      if (g_no_lb) spec.load_lb.reset();
      if (g_lo) spec.lo = *g_lo;
      if (g_hi) spec.hi = *g_hi;
      io::write_instance(generate(spec), gen_out, gen_tsv);
      return 0;
    }

    if (*sol) {
      Instance inst = load(sargs.instance, sargs.lb);
      Solved s = solve(inst, sargs.alg, sargs.t, sargs.iterations);
      std::string csv = io::matching_csv(s.matching);
      if (!sargs.stats.empty()) {
        MatchingStats stats = compute_stats(inst, s.matching, sargs.timing ? s.seconds : 0.0);
        json doc = io::to_json(stats);
        if (sargs.alg != "tpms") doc["t"] = s.t;
        io::atomic_write(sargs.stats, doc.dump(2) + "\n");
      }
      emit(out, sargs.output, csv);
      return 0;
    }

    if (*srch) {
      Instance inst = load(s_instance, s_lb);
      ThresholdSearchResult r;
      if (s_alg == "fairir") {
        r = search_t_fairir(inst, s_iterations);
      } else {
        FairFlowSearchOptions opt;
        opt.time_budget = s_budget;
        r = search_t_fairflow(inst, s_iterations, opt);
      }
      json probes = json::array();
      for (const Probe& p : r.probes) {
        json j = {{"t", p.t}, {"success", p.success}};
        if (s_alg == "fairflow") j["min_score"] = p.min_score;
        probes.push_back(std::move(j));
      }
      json doc = {{"t_star", r.t_star}, {"t_lo", r.t_lo}, {"t_hi", r.t_hi}, {"probes", probes}};
      if (s_alg == "fairflow") doc["best_min_score"] = r.best_min_score;
      emit(out, s_out, doc.dump(2) + "\n");
      return 0;
    }

    if (*st || *pr || *ver) {
      Instance inst = io::read_instance(m_instance);
      Matching m = io::read_matching(m_matching, inst.num_reviewers(), inst.num_papers());
      if (*st) {
        emit(out, m_out, io::to_json(compute_stats(inst, m)).dump(2) + "\n");
        return 0;
      }
      if (*pr) {
        Vector s = paper_scores(inst, m);
        Profile p = compute_profile(std::vector<double>(s.begin(), s.end()));
        emit(out, m_out, io::to_json(p).dump(2) + "\n");
        return 0;
      }
      ValidateOptions vo;
      vo.load_slack = v_slack;
      vo.fairness_threshold = v_t;
      vo.fairness_slack = v_fslack;
      auto violations = validate(inst, m, vo);
      for (const Violation& v : violations) err << "violation: " << describe(v) << "\n";
      json doc = {{"valid", violations.empty()},
                  {"violations", violations.size()},
                  {"objective", objective(inst, m)}};
      if (oracle::search_space_size(inst) <= oracle::kMaxSearchSpace) {
        try {
          oracle::Best best = oracle::brute_force_optimal(inst);
          doc["oracle_objective"] = best.value;
          doc["oracle_maximin"] = oracle::brute_force_maximin(inst).value;
        } catch (const Error&) {
          doc["oracle_objective"] = nullptr;
        }
      }
      out << doc.dump(2) << "\n";
      return violations.empty() ? 0 : 2;
    }

    if (*bench) {
      Instance inst = load(b_instance, b_lb);
      const std::string data =
          b_data.empty() ? std::filesystem::path(b_instance).stem().string() : b_data;
      const std::string bounds = inst.has_load_lb() ? "Lo + Up" : "Up";
      std::string csv = io::bench_header() + "\n";
      const std::pair<const char*, const char*> algs[] = {
          {"tpms", "TPMS"}, {"fairir", "FairIR"}, {"fairflow", "FairFlow"}};
      for (auto [key, label] : algs) {
        Solved s = solve(inst, key, "auto", b_iterations);
        csv += io::bench_row(data, bounds, label, compute_stats(inst, s.matching, s.seconds)) +
               "\n";
      }
      emit(out, b_out, csv);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fairmatch
