#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  if (const char* p = std::getenv("CURVKIT_CLI_PATH")) return p;
  return CURVKIT_CLI_DEFAULT_PATH;
}

int run(const std::string& args) {
  const std::string cmd = "\"" + cli_path() + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("curvkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    // Two triangles joined by a bridge, original ids with gaps.
    std::ofstream(dir_ / "g.edges") << "# toy\n10 20\n20 30\n30 10\n30 40\n40 50\n50 60\n60 40\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string edges() const { return (dir_ / "g.edges").string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CurvatureWritesCsvAndIdMap) {
  ASSERT_EQ(run("curvature --edges " + edges() + " --kind bfc --out " + (dir_ / "c").string()), 0);
  const auto csv = slurp(dir_ / "c" / "curvature.csv");
  EXPECT_EQ(csv.rfind("u,v,curvature\n", 0), 0u);
  // bridge 2-3 in compact ids: degrees 3 and 3, no triangles: 2/3+2/3-2.
  EXPECT_NE(csv.find("2,3,-0.666667\n"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "c" / "id_map.csv"),
            "compact_id,original_id\n0,10\n1,20\n2,30\n3,40\n4,50\n5,60\n");
}

TEST_F(Cli, AuditOutputs) {
  ASSERT_EQ(run("audit --edges " + edges() + " --kind bfc --max-iter 3 --seed 1 --dataset toy --out " +
                (dir_ / "a").string()),
            0);
  auto j = nlohmann::json::parse(slurp(dir_ / "a" / "summary.json"));
  EXPECT_EQ(j["dataset"], "toy");
  EXPECT_EQ(j["kind"], "bfc");
  EXPECT_EQ(j["edges_rewired"], 3);
  EXPECT_TRUE(j["cond2"].contains("count"));
  EXPECT_TRUE(j["cond2b"].contains("percent"));
  const auto scatter = slurp(dir_ / "a" / "scatter.csv");
  EXPECT_EQ(scatter.rfind("delta_max,inv_triangles,inv_gamma_max,step_fraction,cond2b\n", 0), 0u);
  EXPECT_EQ(std::count(scatter.begin(), scatter.end(), '\n'), 4);
}

TEST_F(Cli, KindNoneLeavesGraphUnchanged) {
  ASSERT_EQ(run("rewire --edges " + edges() + " --kind none --max-iter 5 --seed 3 --out " +
                (dir_ / "r").string()),
            0);
  EXPECT_EQ(slurp(dir_ / "r" / "rewired.edges"), "0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n");
  EXPECT_EQ(slurp(dir_ / "r" / "trace.jsonl"), "");
}

TEST_F(Cli, Errors) {
  EXPECT_EQ(run("curvature --edges " + edges() + " --kind bfc --bogus --out x"), 1);
  EXPECT_EQ(run("audit --edges " + edges() + " --out " + (dir_ / "n").string()), 1);
  EXPECT_EQ(run("curvature --edges " + edges() + " --kind nope --out " + (dir_ / "n").string()), 1);
  std::ofstream(dir_ / "bad.edges") << "1 2\n3\n";
  EXPECT_EQ(run("curvature --edges " + (dir_ / "bad.edges").string() + " --kind bfc --out " +
                (dir_ / "n").string()),
            1);
  EXPECT_EQ(run(""), 1);
}

TEST_F(Cli, RerunsAreByteIdentical) {
  for (const char* sub : {"a1", "a2"}) {
    ASSERT_EQ(run("audit --edges " + edges() + " --kind jlc --max-iter 6 --tau 5 --cplus 0.5 --seed 42 --out " +
                  (dir_ / sub).string()),
              0);
  }
  for (const char* f : {"summary.json", "scatter.csv", "trace.jsonl", "id_map.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a1" / f), slurp(dir_ / "a2" / f)) << f;
  }
}

TEST_F(Cli, VerifyBoundDoubleStar) {
  ASSERT_EQ(run("verify-bound --double-star 25 --out " + (dir_ / "v").string()), 0);
  auto j = nlohmann::json::parse(slurp(dir_ / "v" / "report.json"));
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(run("verify-bound --double-star 3"), 1);
}

TEST_F(Cli, Stats) {
  std::ofstream(dir_ / "s.csv") << "config_id,accuracy\n";
  {
    std::ofstream os(dir_ / "s.csv", std::ios::app);
    for (int i = 1; i <= 10; ++i) os << i << ',' << i << '\n';
  }
  ASSERT_EQ(run("stats top --samples " + (dir_ / "s.csv").string() + " --fraction 0.2 --out " +
                (dir_ / "t").string()),
            0);
  auto j = nlohmann::json::parse(slurp(dir_ / "t" / "top_summary.json"));
  EXPECT_DOUBLE_EQ(j["mean"].get<double>(), 9.5);
  EXPECT_EQ(run("stats spectral-gap --edges " + edges()), 0);
  std::ofstream(dir_ / "split.edges") << "1 2\n3 4\n";
  EXPECT_EQ(run("stats spectral-gap --edges " + (dir_ / "split.edges").string()), 1);
  EXPECT_EQ(run("stats spectral-gap --lcc --edges " + (dir_ / "split.edges").string()), 0);
}
