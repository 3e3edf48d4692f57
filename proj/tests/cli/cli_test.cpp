#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace svmpool::cli;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "svmpool");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Outcome o;
  o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("svmpool_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& leaf) const { return (dir_ / leaf).string(); }

  std::string small_data() {
    const auto o = run_in_process({"synth", "--classes", "3", "--per-class", "6", "--dim", "12", "--seed", "4",
                                   "--out", path("d.json")});
    EXPECT_EQ(o.code, kExitOk) << o.err;
    return path("d.json");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SynthWritesManifestAndBlob) {
  const auto data = small_data();
  EXPECT_TRUE(fs::exists(data));
  EXPECT_TRUE(fs::exists(data + ".f32"));
}

TEST_F(CliTest, SynthTableFormat) {
  const auto o = run_in_process({"synth", "--classes", "2", "--per-class", "3", "--dim", "4", "--format", "table",
                                 "--out", path("t.csv")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(slurp(path("t.csv")).rfind("#svmpool-table,1\n", 0), 0u);
  const auto p = run_in_process({"pool", "--table", path("t.csv"), "--out", path("d.bin")});
  EXPECT_EQ(p.code, kExitOk) << p.err;
}

TEST_F(CliTest, EvalReportsThreeFoldAccuracies) {
  const auto data = small_data();
  const auto o = run_in_process({"eval", "--data", data, "--methods", "svmp,average_pool", "--out", path("r.txt")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto report = slurp(path("r.txt"));
  const auto folds = value_of(report, "method.svmp.fold_accuracy");
  EXPECT_EQ(std::count(folds.begin(), folds.end(), ','), 2) << folds;
  EXPECT_FALSE(value_of(report, "method.average_pool.mean_accuracy").empty());
  EXPECT_TRUE(fs::exists(path("r.txt.timings.txt")));
}

TEST_F(CliTest, FixedCEchoedInConfig) {
  const auto data = small_data();
  const auto o = run_in_process({"pool", "--data", data, "--c-fixed", "0.5", "--out", path("d.bin")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(value_of(o.out, "config.c_fixed"), "0.5");
  const auto g = run_in_process({"pool", "--data", data, "--out", path("e.bin")});
  EXPECT_EQ(value_of(g.out, "config.c_fixed"), "none");
}

TEST_F(CliTest, UsageErrors) {
  const auto data = small_data();
  EXPECT_EQ(run_in_process({"eval", "--data", data, "--eta", "1.5"}).code, kExitUsage);
  EXPECT_EQ(run_in_process({"eval", "--data", data, "--folds", "1"}).code, kExitUsage);
  EXPECT_EQ(run_in_process({"pool", "--kind", "bogus", "--data", data}).code, kExitUsage);
  EXPECT_EQ(run_in_process({"frobnicate"}).code, kExitUsage);
  const auto o = run_in_process({"eval", "--data", data, "--methods", "nope"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("category=usage"), std::string::npos) << o.err;
}

TEST_F(CliTest, DataErrors) {
  auto o = run_in_process({"pool", "--data", path("missing.json"), "--out", path("x.bin")});
  EXPECT_EQ(o.code, kExitData);
  EXPECT_NE(o.err.find("code=IoFailure"), std::string::npos) << o.err;
  const auto data = small_data();
  fs::resize_file(data + ".f32", 64);
  o = run_in_process({"pool", "--data", data, "--out", path("x.bin")});
  EXPECT_EQ(o.code, kExitData);
  EXPECT_NE(o.err.find("code=CorruptFile"), std::string::npos) << o.err;
}

TEST_F(CliTest, TrainWritesModel) {
  const auto data = small_data();
  const auto o = run_in_process({"train", "--data", data, "--max-bcd-iters", "2", "--out", path("m.bin")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(fs::exists(path("m.bin")));
  EXPECT_FALSE(value_of(o.out, "bcd.iterations").empty());
}

TEST_F(CliTest, ReportTable) {
  const auto data = small_data();
  const auto o = run_in_process({"report", "--data", data, "--out", path("rep.txt")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto text = slurp(path("rep.txt"));
  EXPECT_NE(text.find("# method"), std::string::npos);
  EXPECT_FALSE(value_of(text, "delta.svmp_minus_average_pool").empty());
}

// The executable itself: exit codes, env overrides, byte-identical reruns.
TEST_F(CliTest, BinaryDeterministicAndEnvAware) {
  const std::string exe = SVMPOOL_CLI_PATH;
  const auto data = small_data();
  auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()); };
  const std::string base = exe + " eval --data " + data + " --methods svmp,nsvmp --out ";
  ASSERT_EQ(sh(base + path("a.txt") + " 2>/dev/null"), 0);
  ASSERT_EQ(sh(base + path("b.txt") + " 2>/dev/null"), 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));

  ASSERT_EQ(sh("SVMPOOL_ETA=0.5 " + base + path("env.txt") + " 2>/dev/null"), 0);
  EXPECT_EQ(value_of(slurp(path("env.txt")), "config.eta"), "0.5");

  const int status = sh(exe + " pool --data " + path("nothing.json") + " --out " + path("x.bin") + " >/dev/null 2>&1");
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kExitData);
}
