// Copyright 2026 The tunnelbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the tunnelbench executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "tunnelbench/tunnelbench.hpp"

namespace fs = std::filesystem;
namespace tb = tunnelbench;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tunnelbench_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(TUNNELBENCH_CLI) + " " + args + " >" + (dir_ / "stdout.txt").string() +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  }
  std::string p(const std::string& rel) const { return (dir_ / rel).string(); }
  std::string slurp(const std::string& rel) const { return tb::read_file(p(rel)); }

  fs::path dir_;
};

std::size_t count_files(const fs::path& d, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(d))
    if (e.path().filename().string().rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_F(Cli, GenerateSolveBenchRoundTrip) {
  ASSERT_EQ(run("generate weak-strong-pair --out " + p("inst")), 0);
  ASSERT_EQ(run("generate weak-strong-network --sizes 1x2,2x2,2x4 --count 4 --seed 3 --out " + p("inst")), 0);
  EXPECT_EQ(count_files(p("inst"), "network_"), 12u);

  auto pair = tb::read_ising_instance(p("inst/pair.json"));
  EXPECT_EQ(pair.problem.size(), 16u);
  ASSERT_TRUE(pair.metadata.reference_energy);
  EXPECT_NEAR(*pair.metadata.reference_energy, -40.48, 1e-9);

  std::string nets;
  for (const auto& e : fs::directory_iterator(p("inst")))
    if (e.path().filename().string().rfind("network_", 0) == 0) nets += " " + e.path().string();
  ASSERT_EQ(run("solve sa" + nets + " " + p("inst/pair.json") + " --runs 20 --sweeps 300 --out " + p("sa.jsonl")), 0);
  ASSERT_EQ(run("solve qmc " + p("inst/pair.json") + " --runs 5 --sweeps 200 --trotter 16 --out " + p("qmc.jsonl")), 0);
  const auto recs = tb::bench::parse_jsonl(slurp("sa.jsonl"));
  EXPECT_EQ(recs.size(), 13u * 20u);
  for (const auto& r : recs) {
    ASSERT_TRUE(r.reference_energy);
    EXPECT_EQ(r.success, r.energy <= *r.reference_energy + 1e-9);
    EXPECT_GT(r.run_seconds, 0.0);
  }

  ASSERT_EQ(run("bench " + p("sa.jsonl") + " " + p("qmc.jsonl") + " --quantiles 0.5,0.75 --out " + p("sum.csv")), 0);
  const auto csv = slurp("sum.csv");
  EXPECT_EQ(csv.rfind("N,quantile,tts_seconds,ci_lo,ci_hi,algorithm\n", 0), 0u);
  EXPECT_NE(csv.find("16,0.5,"), std::string::npos);
  EXPECT_NE(csv.find("64,0.75,"), std::string::npos);
  EXPECT_NE(csv.find(",qmc\n"), std::string::npos);

  // same seed, same bytes
  ASSERT_EQ(run("bench " + p("qmc.jsonl") + " " + p("sa.jsonl") + " --quantiles 0.5,0.75 --out " + p("sum2.csv")), 0);
  EXPECT_EQ(slurp("sum2.csv"), csv);
  ASSERT_EQ(run("solve sa" + nets + " " + p("inst/pair.json") + " --runs 20 --sweeps 300 --out " + p("sa2.jsonl")), 0);
  EXPECT_EQ(slurp("sa2.jsonl"), slurp("sa.jsonl"));
}

TEST_F(Cli, BruteMatchesMetadata) {
  ASSERT_EQ(run("generate random-ising --sizes 1x2 --count 2 --seed 9 --out " + p("inst")), 0);
  ASSERT_EQ(run("solve brute " + p("inst/random_16_000.json") + " " + p("inst/random_16_001.json") + " --out " +
                p("b.jsonl")),
            0);
  for (const auto& r : tb::bench::parse_jsonl(slurp("b.jsonl"))) {
    ASSERT_TRUE(r.reference_energy);
    EXPECT_NEAR(r.energy, *r.reference_energy, 1e-9);
    EXPECT_TRUE(r.success);
  }
}

TEST_F(Cli, ExactWritesSpectrum) {
  ASSERT_EQ(run("generate weak-strong-pair --out " + p("inst")), 0);
  ASSERT_EQ(run("solve exact " + p("inst/pair.json") + " --points 11 --out " + p("spec.csv")), 0);
  const auto csv = slurp("spec.csv");
  EXPECT_EQ(csv.rfind("s,E0,E1,E2\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

TEST_F(Cli, UnsupportedProblemGivesErrorRecord) {
  tb::write_file(p("k3.json"),
                 R"({"format":"kspin-1","n":3,"terms":[{"vars":[0,1,2],"c":1}],"metadata":{"generator":"test"}})");
  ASSERT_EQ(run("solve qmc " + p("k3.json") + " --runs 3 --out " + p("q.jsonl")), 0);
  const auto recs = tb::bench::parse_jsonl(slurp("q.jsonl"));
  ASSERT_EQ(recs.size(), 1u);
  ASSERT_TRUE(recs[0].error);
  EXPECT_FALSE(recs[0].success);
  ASSERT_EQ(run("bench " + p("q.jsonl") + " --out " + p("s.csv")), 0);
  EXPECT_NE(slurp("s.csv").find("3,0.5,absent,absent,absent,qmc"), std::string::npos);
}

TEST_F(Cli, NppGenerateAndStudy) {
  ASSERT_EQ(run("generate npp --N 20 --count 2 --out " + p("inst")), 0);
  const auto inst = tb::npp::read_npp_instance(p("inst/npp_20_000.json"));
  EXPECT_EQ(inst.size(), 20u);
  EXPECT_EQ(inst.b, 20u);
  ASSERT_EQ(run("solve sa " + p("inst/npp_20_000.json") + " --runs 4 --sweeps 50 --geometric --beta-init 0.5 "
                "--beta-final 100 --out " + p("n.jsonl")), 0);
  EXPECT_EQ(tb::bench::parse_jsonl(slurp("n.jsonl")).size(), 4u);

  ASSERT_EQ(run("npp-study --sizes 10,12,14,16 --count 8 --runs 40 --out " + p("study")), 0);
  const auto res = slurp("study/npp_residues.csv");
  EXPECT_NE(res.find("16,kk,"), std::string::npos);
  EXPECT_NE(slurp("study/npp_at.csv").find("16,2,"), std::string::npos);
  const auto fit = tb::json::parse(slurp("study/npp_fit.json"));
  EXPECT_TRUE(fit["alpha"].is_number());
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("solve sa " + p("missing.json")), 1);
  EXPECT_EQ(run("generate nonsense --out " + p("x")), 1);
  EXPECT_EQ(run("solve sa"), 1);
  tb::write_file(p("bad.jsonl"), "{\"N\": 3}\n");
  EXPECT_EQ(run("bench " + p("bad.jsonl")), 1);
  EXPECT_EQ(run("npp-study --sizes 40 --count 2 --heuristics brute --out " + p("s")), 1);
  // one run per grid point: the median instance never succeeds
  EXPECT_EQ(run("npp-study --sizes 20 --count 3 --runs 1 --heuristics sa --out " + p("s")), 2);
}
