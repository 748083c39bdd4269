#include "fairmatch/cli.hpp"
#include "fairmatch/io.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace {

using namespace fairmatch;
namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fairmatch_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    two_tier_ = (dir_ / "two_tier.json").string();
    io::write_instance(fixtures::two_tier(), two_tier_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string two_tier_;
};

TEST_F(Cli, SolveTpmsTwoTier) {
  CliRun r = cli({"solve", two_tier_, "--alg", "tpms", "--stats", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  Matching m = io::matching_from_csv(r.out, 4, 4);
  EXPECT_EQ(m.size(), 8);
  EXPECT_TRUE(validate(fixtures::two_tier(), m).empty());
  auto stats = nlohmann::json::parse(io::read_file(path("s.json")));
  EXPECT_NEAR(stats.at("objective").get<double>(), 4.0, 1e-9);
  EXPECT_EQ(stats.at("wall_time").get<double>(), 0.0);
}

TEST_F(Cli, SolveFairIrAutoRespectsGuarantees) {
  Instance inst = fixtures::shaped_instance(21, 8, 10, 2, 3, 1, 0.0, 1.0);
  io::write_instance(inst, path("inst.json"));
  CliRun r = cli({"solve", path("inst.json"), "--alg", "fairir", "--t", "auto", "--stats",
               path("s.json"), "-o", path("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const double t = nlohmann::json::parse(io::read_file(path("s.json"))).at("t").get<double>();
  const std::string a_max = std::to_string(inst.affinity().maxCoeff());
  CliRun v = cli({"verify", path("inst.json"), path("m.csv"), "--load-slack", "1", "--t",
               std::to_string(t), "--fairness-slack", a_max});
  EXPECT_EQ(v.code, 0) << v.err;
}

TEST_F(Cli, VerifyNamesViolatedConstraint) {
  Matching bad = fixtures::two_tier_fair();
  bad.unassign(2, 0);
  io::write_matching(bad, path("bad.csv"));
  CliRun r = cli({"verify", two_tier_, path("bad.csv")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("coverage"), std::string::npos) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_FALSE(doc.at("valid").get<bool>());
  EXPECT_NEAR(doc.at("oracle_objective").get<double>(), 4.0, 1e-9);
  EXPECT_NEAR(doc.at("oracle_maximin").get<double>(), 1.0, 1e-9);
}

TEST_F(Cli, OutputsAreDeterministic) {
  for (const char* alg : {"tpms", "fairir", "fairflow"}) {
    CliRun a = cli({"solve", two_tier_, "--alg", alg, "--stats", path("a.json")});
    CliRun b = cli({"solve", two_tier_, "--alg", alg, "--stats", path("b.json")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << alg;
    EXPECT_EQ(io::read_file(path("a.json")), io::read_file(path("b.json"))) << alg;
  }
}

TEST_F(Cli, GenerateThenStatsAndProfile) {
  CliRun g = cli({"generate", "--model", "block-expert", "--reviewers", "10", "--papers", "12",
               "--coverage", "2", "--load-ub", "3", "--seed", "5", "-o", path("g.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  Instance inst = io::read_instance(path("g.json"));
  EXPECT_EQ(inst.num_reviewers(), 10);
  EXPECT_EQ(inst.num_papers(), 12);
  CliRun s = cli({"solve", path("g.json"), "-o", path("m.csv")});
  ASSERT_EQ(s.code, 0) << s.err;
  CliRun st = cli({"stats", path("g.json"), path("m.csv")});
  ASSERT_EQ(st.code, 0) << st.err;
  EXPECT_TRUE(nlohmann::json::parse(st.out).contains("std_ps"));
  CliRun pr = cli({"profile", path("g.json"), path("m.csv")});
  ASSERT_EQ(pr.code, 0) << pr.err;
  EXPECT_EQ(nlohmann::json::parse(pr.out).at("quintiles").size(), 5u);
}

TEST_F(Cli, SearchTReportsProbes) {
  CliRun r = cli({"search-t", two_tier_, "--alg", "fairir", "--iterations", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc.at("t_star").get<double>(), 1.0, 1e-9);
  EXPECT_EQ(doc.at("probes").size(), 4u);
}

TEST_F(Cli, BenchEmitsThreeRows) {
  CliRun r = cli({"bench", two_tier_, "--data", "two_tier", "--iterations", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], io::bench_header());
  EXPECT_EQ(lines[1].rfind("two_tier,Lo + Up,TPMS,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("two_tier,Lo + Up,FairFlow,", 0), 0u);
}

TEST_F(Cli, BadArguments) {
  EXPECT_NE(cli({}).code, 0);
  EXPECT_NE(cli({"solve", two_tier_, "--alg", "simplex"}).code, 0);
  CliRun r = cli({"solve", path("missing.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  CliRun t = cli({"solve", two_tier_, "--alg", "fairir", "--t", "high"});
  EXPECT_NE(t.err.find("not a number"), std::string::npos);
}

TEST_F(Cli, BinaryExitCodes) {
  const char* bin = std::getenv("FAIRMATCH_BIN");
  if (bin == nullptr) GTEST_SKIP() << "FAIRMATCH_BIN not set";
  const std::string b = bin;
  EXPECT_EQ(std::system((b + " solve " + two_tier_ + " -o " + path("m.csv")).c_str()), 0);
  EXPECT_EQ(io::matching_from_csv(io::read_file(path("m.csv")), 4, 4).size(), 8);
  EXPECT_NE(std::system((b + " solve " + path("none.json") + " 2>/dev/null").c_str()), 0);
}

}  // namespace
