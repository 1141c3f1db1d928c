#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "semharq/bench/cli.hpp"

namespace fs = std::filesystem;
using namespace semharq::bench;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "semharq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
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
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("semharq_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    auto r = run({"train", "--epochs", "4", "--out", dir_.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static fs::path dir_;
};

fs::path Cli::dir_;

}  // namespace

TEST_F(Cli, TrainWritesCheckpoints) {
  for (const char* f : {"codec_a.json", "codec_b.json", "codec_best.json", "vocab.json",
                        "train_manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
}

TEST_F(Cli, IkSweepWritesCsvAndSvg) {
  const auto out = dir_ / "ik";
  auto r = run({"ik-sweep", "--scenario", "misaligned", "--k", "1..5", "--sentences", "3", "--trials",
                "2", "--checkpoint-a", (dir_ / "codec_a.json").string(), "--checkpoint-b",
                (dir_ / "codec_b.json").string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "ik_sweep_misaligned.csv"));
  EXPECT_TRUE(fs::exists(out / "ik_sweep_misaligned_bleu.svg"));
  EXPECT_TRUE(fs::exists(out / "ik_sweep_misaligned.jsonl"));
}

TEST_F(Cli, SameSeedSameBytes) {
  std::string first;
  for (int i = 0; i < 2; ++i) {
    auto r = run({"--seed", "7", "--out", dir_.string(), "combining-sweep", "--snr", "-3,3",
                  "--sentences", "3", "--trials", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto csv = slurp(dir_ / "combining_sweep.csv");
    if (i == 0) first = csv;
    else EXPECT_EQ(csv, first);
  }
  EXPECT_FALSE(first.empty());
}

TEST_F(Cli, ConfigFileDrivesSweep) {
  const auto cfg = dir_ / "sweep.conf";
  std::ofstream(cfg) << "[experiment]\nn_sentences = 2\nn_trials = 2\nthresholds = [0.5, 0.9]\n"
                        "metrics = [B, F]\n[output]\ndir = \""
                     << (dir_ / "from_config").string() << "\"\n";
  auto r = run({"--config", cfg.string(), "quality-threshold-sweep", "--checkpoint-a",
                (dir_ / "codec_a.json").string(), "--checkpoint-b", (dir_ / "codec_b.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = slurp(dir_ / "from_config" / "quality_threshold_sweep.csv");
  EXPECT_NE(csv.find("\nB,0.9,"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",4\n"), std::string::npos) << csv;
  EXPECT_TRUE(fs::exists(dir_ / "from_config" / "quality_threshold_sweep_dynamic_range.csv"));
}

TEST_F(Cli, SessionTrace) {
  auto r = run({"--out", dir_.string(), "session", "--sentence",
                "a man is riding a horse on the beach", "--metric", "B", "--combiner",
                "weighted-avg", "--q-th", "0.85", "--k-max", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("attempt 1: q_1 = "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("combined "), std::string::npos);
  EXPECT_NE(r.out.find("scenario misaligned"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"ik-sweep", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"session"}).code, kExitUsage);
  auto r = run({"--out", dir_.string(), "ik-sweep", "--combiners", "selection"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("selection"), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(Cli, MissingCheckpointIsRuntimeError) {
  auto r = run({"--out", (dir_ / "empty").string(), "ik-sweep", "--sentences", "2"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("missing checkpoint"), std::string::npos) << r.err;
}

TEST(OutDir, Resolution) {
  EXPECT_EQ(resolve_out_dir("flag", "conf"), fs::path("flag"));
  EXPECT_EQ(resolve_out_dir("", "conf"), fs::path("conf"));
  ::setenv("SEMHARQ_OUT", "/tmp/from_env", 1);
  EXPECT_EQ(resolve_out_dir("", ""), fs::path("/tmp/from_env"));
  ::unsetenv("SEMHARQ_OUT");
  EXPECT_EQ(resolve_out_dir("", ""), fs::path("semharq_out"));
}
