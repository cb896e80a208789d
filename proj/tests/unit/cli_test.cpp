#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sentinel/graph.hpp"
#include "sentinel_cli/cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sentinel::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sentinel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    sentinel::write_graph(sentinel::Graph::complete(4), path("k4.txt"));
    sentinel::write_graph(sentinel::Graph::empty(10), path("empty10.txt"));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

TEST_F(Cli, SampleNullHeaderAndDeterminism) {
  const auto a = path("a.txt"), b = path("b.txt");
  ASSERT_EQ(run({"sample", "--model", "null", "--N", "100", "--p0", "0.1", "--seed", "7", "--out", a}).code, 0);
  ASSERT_EQ(run({"sample", "--model", "null", "--N", "100", "--p0", "0.1", "--seed", "7", "--out", b}).code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  const auto g = sentinel::read_graph(a);
  EXPECT_EQ(text.substr(0, text.find('\n')), "100 " + std::to_string(g.total_edges()));
  EXPECT_FALSE(fs::exists(a + ".planted"));
  const json log = json::parse(slurp(a + ".run.json"));
  EXPECT_EQ(log["subcommand"], "sample");
  EXPECT_EQ(log["config"]["seed"], "7");
  EXPECT_TRUE(log.contains("started_utc"));
}

TEST_F(Cli, SamplePlantedWritesSidecar) {
  const auto a = path("p.txt");
  ASSERT_EQ(run({"sample", "--model", "planted", "--N", "50", "--n", "10", "--p0", "0.1", "--p1", "0.9", "--seed", "1",
                 "--out", a})
                .code,
            0);
  EXPECT_EQ(slurp(a + ".planted"), "0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n");
  const auto u = path("u.txt");
  ASSERT_EQ(run({"sample", "--model", "planted", "--N", "50", "--n", "10", "--p0", "0.1", "--p1", "0.9", "--seed", "1",
                 "--uniform-planted", "--out", u, "--planted-out", path("u.set")})
                .code,
            0);
  std::istringstream lines(slurp(path("u.set")));
  int count = 0;
  for (std::string l; std::getline(lines, l);) ++count;
  EXPECT_EQ(count, 10);
}

TEST_F(Cli, StatExamples) {
  EXPECT_EQ(run({"stat", "--detector", "total_degree", "--graph", path("k4.txt")}).out,
            "{\"detector_id\":\"total_degree\",\"exact\":true,\"value\":6,\"witness\":null}\n");
  EXPECT_EQ(run({"stat", "--detector", "scan", "--n", "3", "--mode", "exact", "--graph", path("k4.txt")}).out,
            "{\"detector_id\":\"scan\",\"exact\":true,\"value\":3,\"witness\":[0,1,2]}\n");
  const json clique = json::parse(run({"stat", "--detector", "clique_number", "--graph", path("empty10.txt")}).out);
  EXPECT_EQ(clique["value"], 1);
  const json dens = json::parse(run({"stat", "--detector", "densest_subgraph", "--graph", path("k4.txt")}).out);
  EXPECT_EQ(dens["value"], 1.5);
  const json peel = json::parse(
      run({"stat", "--detector", "densest_subgraph", "--mode", "peel", "--graph", path("k4.txt")}).out);
  EXPECT_EQ(peel["exact"], false);
}

TEST_F(Cli, ExitCodes) {
  // Detector error: JSON on stdout, exit 4.
  const auto dv = run({"stat", "--detector", "degree_variance", "--graph", path("empty10.txt")});
  EXPECT_EQ(dv.code, sentinel::cli::kDetectorError);
  EXPECT_EQ(json::parse(dv.out)["error"], "DegenerateGraph");
  // Budget: exit 5.
  const auto budget = run({"stat", "--detector", "scan", "--n", "3", "--mode", "exact", "--budget-enumeration", "1",
                           "--graph", path("k4.txt")});
  EXPECT_EQ(budget.code, sentinel::cli::kBudgetExceeded);
  EXPECT_EQ(json::parse(budget.out)["error"], "BudgetExceeded");
  // I/O: exit 3.
  EXPECT_EQ(run({"stat", "--detector", "total_degree", "--graph", path("missing.txt")}).code,
            sentinel::cli::kIoError);
  write("bad.txt", "3 1\n0 7\n");
  EXPECT_EQ(run({"stat", "--detector", "total_degree", "--graph", path("bad.txt")}).code, sentinel::cli::kIoError);
  // Config errors: exit 2.
  EXPECT_EQ(run({"stat", "--detector", "pagerank", "--graph", path("k4.txt")}).code, sentinel::cli::kConfigError);
  EXPECT_EQ(run({"stat", "--graph", path("k4.txt")}).code, sentinel::cli::kConfigError);
  EXPECT_EQ(run({"frobnicate"}).code, sentinel::cli::kConfigError);
  EXPECT_EQ(run({"sample", "--model", "planted", "--N", "5", "--n", "9", "--p0", "0.1", "--p1", "0.5", "--out",
                 path("x.txt")})
                .code,
            sentinel::cli::kConfigError);
  EXPECT_EQ(run({"calibrate", "--detector", "total_degree", "--N", "20", "--p0", "0.1", "--alpha", "0.01",
                 "--replicates", "50"})
                .code,
            sentinel::cli::kConfigError);
  EXPECT_EQ(run({"stat", "--help"}).code, 0);
}

TEST_F(Cli, ClassifyExample) {
  const auto r = run({"classify", "--N", "10000", "--n", "500", "--p0", "0.01", "--p1", "0.1", "--knowledge", "known"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["label"], "TotalDegreeRegime");
  for (const char* key : {"lower1", "lower2", "total", "scan", "relaxed", "max", "densest", "clique_log", "snr"})
    EXPECT_TRUE(j["predicates"].contains(key)) << key;
  EXPECT_EQ(j["n_p0_holds"].is_boolean(), true);
  const auto bare = run({"classify", "--N", "10000", "--n", "500", "--p0", "0.01", "--p1", "0.1", "--no-constraints"});
  EXPECT_TRUE(json::parse(bare.out)["n_p0_holds"].is_null());
}

TEST_F(Cli, CalibrateAndBootstrap) {
  const auto a = run({"calibrate", "--detector", "max_degree", "--N", "40", "--p0", "0.2", "--replicates", "199",
                      "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  const json j = json::parse(a.out);
  EXPECT_EQ(j["replicates"], 199);
  EXPECT_EQ(j["method"], "monte_carlo");
  EXPECT_EQ(a.out, run({"calibrate", "--detector", "max_degree", "--N", "40", "--p0", "0.2", "--replicates", "199",
                        "--seed", "3", "--workers", "3"})
                       .out);
  ASSERT_EQ(run({"sample", "--N", "40", "--p0", "0.2", "--seed", "2", "--out", path("obs.txt")}).code, 0);
  const auto b = run({"calibrate", "--detector", "max_degree", "--method", "bootstrap", "--graph", path("obs.txt"),
                      "--replicates", "99"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(json::parse(b.out)["method"], "bootstrap");
  const auto c = run({"calibrate", "--detector", "total_degree", "--method", "analytic_binomial", "--N", "50", "--p0",
                      "0.2"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json::parse(c.out)["method"], "analytic_binomial");
}

TEST_F(Cli, RiskWithEqualProbabilitiesHasGammaNearOne) {
  const auto r = run({"risk", "--detector", "total_degree", "--N", "50", "--n", "10", "--p0", "0.1", "--p1", "0.1",
                      "--alpha", "0.1", "--replicates", "400", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "N,n,p0,p1,model,detector,alpha,replicates,type1,type2,gamma,ci_half,regime,seconds");
  std::vector<std::string> f;
  std::stringstream cells(row);
  for (std::string c; std::getline(cells, c, ',');) f.push_back(c);
  ASSERT_GE(f.size(), 12u);
  EXPECT_NEAR(std::stod(f[10]), 1.0, std::stod(f[11]));
  EXPECT_EQ(row.back(), ',');

  const auto j = run({"risk", "--detector", "total_degree", "--N", "50", "--n", "10", "--p0", "0.1", "--p1", "0.1",
                      "--alpha", "0.1", "--replicates", "400", "--seed", "5", "--format", "json", "--workers", "2"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(json::parse(j.out.substr(0, j.out.find('\n')))["risk"]["gamma_hat"].get<double>(), std::stod(f[10]));
}

TEST_F(Cli, PhaseResumeMatchesUninterrupted) {
  const json sweep{{"cells",
                    {{{"N", 40}, {"n", 6}, {"p0", 0.1}, {"p1", 0.6}, {"model", "PlantedKnownP0"}},
                     {{"N", 40}, {"n", 10}, {"p0", 0.1}, {"p1", 0.4}, {"model", "PlantedKnownP0"}}}},
                   {"detectors", {"total_degree", "max_degree"}},
                   {"calibration_replicates", 99},
                   {"replicates", 50},
                   {"seed", 9}};
  write("sweep.json", sweep.dump());
  ASSERT_EQ(run({"phase", "--config", path("sweep.json"), "--out", path("full.csv")}).code, 0);
  const std::string full = slurp(path("full.csv"));
  EXPECT_EQ(std::count(full.begin(), full.end(), '\n'), 5);

  const auto ck = path("ck");
  ASSERT_EQ(run({"phase", "--config", path("sweep.json"), "--resume", ck, "--out", path("first.csv")}).code, 0);
  const std::string lines = slurp(fs::path(ck) / "checkpoint.jsonl");
  std::size_t cut = 0;
  for (int i = 0; i < 2; ++i) cut = lines.find('\n', cut) + 1;
  std::ofstream(fs::path(ck) / "checkpoint.jsonl", std::ios::trunc) << lines.substr(0, cut + 40);
  ASSERT_EQ(run({"phase", "--config", path("sweep.json"), "--resume", ck, "--out", path("resumed.csv")}).code, 0);
  EXPECT_EQ(slurp(path("resumed.csv")), full);
  EXPECT_EQ(slurp(path("first.csv")), full);

  EXPECT_EQ(run({"phase", "--config", path("missing.json")}).code, sentinel::cli::kIoError);
  write("bad.json", R"({"cells": [], "oops": 1})");
  EXPECT_EQ(run({"phase", "--config", path("bad.json")}).code, sentinel::cli::kConfigError);
}

TEST_F(Cli, ConfigFileValuesYieldToFlags) {
  write("cfg.json", R"({"model": "null", "N": 30, "p0": 0.3, "seed": 3})");
  ASSERT_EQ(run({"sample", "--config", path("cfg.json"), "--seed", "4", "--out", path("a.txt")}).code, 0);
  ASSERT_EQ(run({"sample", "--N", "30", "--p0", "0.3", "--seed", "4", "--out", path("b.txt")}).code, 0);
  ASSERT_EQ(run({"sample", "--N", "30", "--p0", "0.3", "--seed", "3", "--out", path("c.txt")}).code, 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
  EXPECT_NE(slurp(path("a.txt")), slurp(path("c.txt")));
  const json log = json::parse(slurp(path("a.txt.run.json")));
  EXPECT_EQ(log["config"]["seed"], "4");
  EXPECT_EQ(log["config"]["N"], "30");

  write("cfg2.json", R"({"detector": "scan", "n": 3, "mode": "exact", "lower_bound": false})");
  const auto s = run({"stat", "--config", path("cfg2.json"), "--graph", path("k4.txt")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(json::parse(s.out)["value"], 3);
  EXPECT_NE(s.err.find("resolved config: "), std::string::npos);

  write("bad.json", R"({"N": 30, "colour": "red"})");
  EXPECT_EQ(run({"sample", "--config", path("bad.json")}).code, sentinel::cli::kConfigError);
}

// Golden help text. SENTINEL_UPDATE_GOLDEN=1 rewrites the files.
TEST(CliHelp, MatchesGoldenFiles) {
  const bool update = std::getenv("SENTINEL_UPDATE_GOLDEN") != nullptr;
  for (std::string sub : {"", "sample", "stat", "calibrate", "risk", "phase", "classify"}) {
    std::vector<std::string> args;
    if (!sub.empty()) args.push_back(sub);
    args.push_back("--help");
    const auto r = run(args);
    EXPECT_EQ(r.code, 0);
    const fs::path golden = fs::path(SENTINEL_GOLDEN_DIR) / ((sub.empty() ? "main" : sub) + "_help.txt");
    if (update) std::ofstream(golden, std::ios::binary) << r.out;
    EXPECT_EQ(r.out, slurp(golden)) << golden;
  }
}

}  // namespace
