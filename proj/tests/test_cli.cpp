#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "msca/array_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(MSCA_CLI_PATH) + "' " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    r.out.append(buf, n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("msca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ConstructDensity) {
  const CliRun r = run("construct --t 2 --k 18 --v 2 --lambda 5 --stages D:5 --out " + path("a.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto f = msca::read_array_file(path("a.txt"));
  EXPECT_NEAR(static_cast<double>(f.rows.size()), 29.0, 3.0);
  EXPECT_EQ(f.params, (msca::CAParams{2, 18, 2, 5}));
  const auto record = nlohmann::json::parse(slurp(path("a.txt.record.json")));
  EXPECT_EQ(record["rows"], f.rows.size());
  EXPECT_EQ(record["per_stage"].size(), 1u);
  const auto manifest = nlohmann::json::parse(slurp(path("a.txt.manifest.json")));
  EXPECT_EQ(manifest["command"], "construct");
  EXPECT_EQ(manifest["stages"], "D:5");
  EXPECT_EQ(manifest["params"]["k"], 18);

  const CliRun v = run("verify --file " + path("a.txt"));
  EXPECT_EQ(v.code, 0) << v.out;
}

TEST_F(Cli, ConstructBasicExactRows) {
  ASSERT_EQ(run("construct --stages B:5 --t 2 --k 10 --v 2 --lambda 5 --out " + path("b.txt")).code, 0);
  EXPECT_EQ(msca::read_array_file(path("b.txt")).rows.size(), 900u);
}

TEST_F(Cli, ConstructRejectsBadStages) {
  const CliRun sum = run("construct --t 2 --k 5 --v 2 --lambda 5 --stages D:2,S:2 --out " + path("x.txt"));
  EXPECT_EQ(sum.code, 2);
  EXPECT_NE(sum.out.find("sum"), std::string::npos) << sum.out;
  const CliRun bad = run("construct --t 2 --k 5 --v 2 --lambda 5 --stages D:2,Z:3 --out " + path("x.txt"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("stage 2"), std::string::npos) << bad.out;
  EXPECT_FALSE(fs::exists(path("x.txt")));
  EXPECT_EQ(run("construct --t 2 --k 5").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, ConstructDefaultsToOutputDirEnv) {
  const CliRun r = run("construct --t 2 --k 6 --v 2 --lambda 2 --stages D:1,S:1",
                    "MSCA_OUTPUT_DIR='" + dir_.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(path("ca_t2_k6_v2_l2.txt")));
}

TEST_F(Cli, VerifyExitCodes) {
  const std::string left = fixture_path("ca5_27x18.txt").string();
  EXPECT_EQ(run("verify --file " + left).code, 0);
  const CliRun six = run("verify --file " + left + " --lambda 6");
  EXPECT_EQ(six.code, 1);
  EXPECT_NE(six.out.find("min_coverage 5"), std::string::npos) << six.out;

  std::ofstream(path("cut.txt")) << "3 4 3 2 1\n0 0 0 0\n";
  EXPECT_EQ(run("verify --file " + path("cut.txt")).code, 2);
  EXPECT_EQ(run("verify --file " + path("none.txt")).code, 2);
}

TEST_F(Cli, SweepWritesOneRowPerStageCount) {
  const CliRun r = run("sweep --t 2 --k 6 --v 2 --lambda 3 --max-stages 3 --out " + path("s.csv") +
                    " --entries " + path("e.csv") + " --jobs 2");
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream csv(slurp(path("s.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "ns,min_n,max_n,avg_n,median_n,stddev_n,min_t,max_t,avg_t,median_t,stddev_t");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_TRUE(fs::exists(path("s.csv.manifest.json")));

  const CliRun one = run("sweep --t 2 --k 6 --v 2 --lambda 1 --max-stages 1 --out " + path("one.csv"));
  EXPECT_NE(one.out.find("executions 4"), std::string::npos) << one.out;
}

TEST_F(Cli, SearchIsReproducible) {
  const std::string args = "search --t 2 --k 6 --v 2 --lambda 3 --pop 8 --gens 4 --seed 5 --out-dir ";
  ASSERT_EQ(run(args + path("a")).code, 0);
  ASSERT_EQ(run(args + path("b")).code, 0);
  EXPECT_EQ(slurp(path("a/fronts.csv")), slurp(path("b/fronts.csv")));
  EXPECT_EQ(slurp(path("a/best.json")), slurp(path("b/best.json")));
  const auto best = nlohmann::json::parse(slurp(path("a/best.json")));
  ASSERT_FALSE(best.empty());
  EXPECT_TRUE(best.back().contains("lowest_n"));
  EXPECT_TRUE(best.back()["lowest_t"].contains("selection"));
  const auto manifest = nlohmann::json::parse(slurp(path("a/manifest.json")));
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["time_mode"], "work");

  const CliRun tiny = run("search --t 2 --k 4 --v 2 --lambda 2 --pop 2 --gens 1 --out-dir " + path("c"));
  EXPECT_EQ(tiny.code, 0) << tiny.out;
  EXPECT_EQ(run("search --t 2 --k 4 --v 2 --lambda 2 --pop 1 --out-dir " + path("d")).code, 2);
}

TEST_F(Cli, ProfileFixtures) {
  ASSERT_EQ(run("profile --file " + fixture_path("ca5_27x18.txt").string() + " --lambda 5 --out " +
                path("p.csv"))
                .code,
            0);
  const std::string left = slurp(path("p.csv"));
  EXPECT_NE(left.find("\n26,6,612\n"), std::string::npos);
  ASSERT_EQ(run("profile --file " + fixture_path("ca5_29x18.txt").string() + " --out " +
                path("q.csv"))
                .code,
            0);
  EXPECT_NE(slurp(path("q.csv")).find("\n28,2,612\n"), std::string::npos);

  msca::write_array_file(path("empty.txt"), {{2, 4, 2, 1}, {}});
  EXPECT_EQ(run("profile --file " + path("empty.txt") + " --out " + path("r.csv")).code, 2);
}
