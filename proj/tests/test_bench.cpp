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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tunnelbench/bench.hpp"

namespace tb = tunnelbench;
namespace bench = tunnelbench::bench;

TEST(Bench, TimeToTarget) {
  EXPECT_DOUBLE_EQ(bench::time_to_target(0.99, 20e-6), 20e-6);
  EXPECT_NEAR(bench::time_to_target(0.5, 20e-6), 132.877e-6, 1e-9);
  EXPECT_DOUBLE_EQ(bench::time_to_target(1.0, 3.0), 3.0);
  EXPECT_TRUE(std::isinf(bench::time_to_target(0.0, 3.0)));
  EXPECT_THROW(bench::time_to_target(1.5, 3.0), tb::InputError);
  double prev = INFINITY;
  for (double p = 0.01; p < 1.0; p += 0.01) {
    const double t = bench::time_to_target(p, 1.0);
    EXPECT_LE(t, prev);
    EXPECT_GE(t, 1.0);
    prev = t;
  }
  EXPECT_NEAR(bench::time_to_target(0.99 - 1e-12, 1.0), 1.0, 1e-9);
}

TEST(Bench, EffortModels) {
  EXPECT_NEAR(bench::sa_effort_seconds(5e4, 945), 9.45e-3, 1e-15);
  EXPECT_NEAR(bench::sa_effort_seconds(1, 1), 0.2e-9, 1e-24);
  EXPECT_NEAR(bench::sa_effort_seconds(5e4, 945) * 1e9, 9.45e6, 1e-6);
  EXPECT_DOUBLE_EQ(bench::sa_effort_seconds(100, 64), 2 * bench::sa_effort_seconds(100, 32));
  EXPECT_NEAR(bench::worldline_seconds(32.5, bench::QmcScheduleKind::dw2x), 28.275e-6, 1e-12);
  EXPECT_NEAR(std::abs(bench::worldline_seconds(32.5, bench::QmcScheduleKind::dw2x) / 28.3e-6 - 1), 0, 1e-3);
  EXPECT_NEAR(bench::worldline_seconds(10, bench::QmcScheduleKind::linear), 1.15e-6, 1e-15);
  EXPECT_NEAR(bench::qmc_effort_seconds(23000, 1, 32.5, "dw2x"), 0.650325, 1e-9);
  EXPECT_THROW(bench::qmc_effort_seconds(1, 1, 1, "sigmoid"), tb::InputError);
  EXPECT_THROW(bench::worldline_seconds(0, bench::QmcScheduleKind::linear), tb::InputError);
}

TEST(Bench, QuantileCi) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  auto e = bench::quantile_ci(v, 0.5, 500, 1);
  EXPECT_EQ(e.value, 50);
  EXPECT_LE(e.ci_lo, 50);
  EXPECT_GE(e.ci_hi, 50);
  auto c = bench::quantile_ci(std::vector<double>(30, 7.0), 0.75, 200, 2);
  EXPECT_EQ(c.ci_lo, 7.0);
  EXPECT_EQ(c.ci_hi, 7.0);
  std::vector<double> gaps(100, 1.0);
  for (int i = 0; i < 60; ++i) gaps[i] = INFINITY;
  EXPECT_TRUE(bench::quantile_ci(gaps, 0.5, 100, 3).absent());
  EXPECT_FALSE(bench::quantile_ci(gaps, 0.3, 100, 3).absent());
  EXPECT_THROW(bench::quantile_ci({}, 0.5), tb::InputError);
  EXPECT_THROW(bench::quantile_ci(v, 1.0), tb::InputError);
}

TEST(Bench, QuantileCiCoverage) {
  // Lognormal samples: the 95% interval for the median covers exp(mu).
  tb::Rng rng(11);
  std::lognormal_distribution<double> ln(1.0, 0.8);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(100);
    for (auto& x : s) x = ln(rng);
    auto e = bench::quantile_ci(s, 0.5, 400, tb::derive_seed(12, trial));
    if (e.ci_lo <= std::exp(1.0) && std::exp(1.0) <= e.ci_hi) ++covered;
  }
  EXPECT_GE(covered, 90);
}

TEST(Bench, ScalingFit) {
  std::vector<double> n{10, 12, 14, 16, 18}, t;
  for (double x : n) t.push_back(std::exp2(0.8 * x) * 3.0);
  auto f = bench::scaling_fit(n, t);
  EXPECT_NEAR(f.alpha, 0.8, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-9);
  EXPECT_NEAR(f.residual, 0.0, 1e-9);
  EXPECT_THROW(bench::scaling_fit({1, 2, 3}, {1, 2, 3}), tb::InputError);
  EXPECT_THROW(bench::scaling_fit({1, 2, 3, 4}, {1, 2, 0, 4}), tb::InputError);
  EXPECT_THROW(bench::scaling_fit({1, 2, 3, 4}, {1, 2, INFINITY, 4}), tb::InputError);
}

TEST(Bench, ScalingFitCoverage) {
  tb::Rng rng(13);
  std::normal_distribution<double> noise(0.0, 0.3);
  int covered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> n, t;
    for (int x = 10; x <= 24; x += 2) {
      n.push_back(x);
      t.push_back(std::exp2(0.9 * x + noise(rng)));
    }
    auto f = bench::scaling_fit(n, t);
    if (f.ci_lo <= 0.9 && 0.9 <= f.ci_hi) ++covered;
  }
  EXPECT_GE(covered, 180);
}

TEST(Bench, PairToNetwork) {
  EXPECT_EQ(bench::pair_to_network_estimate(0.95, 1, 1, 1), 2);
  EXPECT_EQ(bench::pair_to_network_estimate(0.9, 2, 1, 1), 3);
  EXPECT_EQ(bench::pair_to_network_estimate(1.0, 7, 10, 2), 20);
  EXPECT_EQ(bench::pair_to_network_estimate(0.999999, 2, 10, 2), 20);
  EXPECT_TRUE(std::isinf(bench::pair_to_network_estimate(0.0, 3, 1, 1)));
  EXPECT_TRUE(std::isinf(bench::pair_to_network_estimate(1e-200, 4, 1, 1)));
}

TEST(Bench, SweepsCondition) {
  EXPECT_TRUE(bench::sweeps_condition_check(23000, 71));
  EXPECT_FALSE(bench::sweeps_condition_check(1, 0.5));
  EXPECT_FALSE(bench::sweeps_condition_check(10, 1.0));
  EXPECT_TRUE(bench::sweeps_condition_check(10, 1.0 + 1e-9));
}

TEST(Bench, DigestIsStableAndKeyOrderFree) {
  EXPECT_EQ(bench::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(bench::fnv1a_hex("a"), "af63dc4c8601ec8c");
  tb::json a = {{"beta", 10}, {"sweeps", 100}}, b = {{"sweeps", 100}, {"beta", 10}};
  EXPECT_EQ(bench::params_digest(a), bench::params_digest(b));
}

namespace {

std::vector<bench::BenchmarkRecord> synthetic_records() {
  std::vector<bench::BenchmarkRecord> out;
  // 4 instances of N=16; instance i succeeds in (i+1) of 4 runs with digest A
  // and always with digest B, whose runs cost 10x more.
  for (int i = 0; i < 4; ++i)
    for (int r = 0; r < 4; ++r)
      for (int d = 0; d < 2; ++d) {
        bench::BenchmarkRecord rec;
        rec.instance_id = "inst" + std::to_string(i);
        rec.algorithm = "sa";
        rec.params_digest = d == 0 ? "A" : "B";
        rec.seed = r;
        rec.N = 16;
        rec.success = d == 1 || r <= i;
        rec.run_seconds = d == 0 ? 1.0 : 10.0;
        out.push_back(rec);
      }
  return out;
}

}  // namespace

TEST(Bench, RecordsRoundTrip) {
  auto recs = synthetic_records();
  recs[0].beta = 3.5;
  recs[0].error = "boom";
  recs[0].reference_energy = -40.48;
  recs[0].energy = tb::infinity;
  auto text = bench::to_jsonl(recs);
  auto back = bench::parse_jsonl(text);
  ASSERT_EQ(back.size(), recs.size());
  EXPECT_EQ(bench::to_jsonl(back), text);
  EXPECT_EQ(std::count_if(back.begin(), back.end(), [](const auto& r) { return std::isinf(r.energy); }), 1);
  EXPECT_THROW(bench::parse_jsonl("{\"algorithm\":1}\n"), tb::InputError);
  EXPECT_THROW(bench::parse_jsonl("not json\n"), tb::InputError);
}

TEST(Bench, SummaryPicksBestParametersPerQuantile) {
  auto recs = synthetic_records();
  bench::SummaryOptions opt;
  opt.quantiles = {0.25, 0.5, 1.0 - 1e-9};
  opt.n_boot = 50;
  auto rows = bench::summarize(recs, opt);
  ASSERT_EQ(rows.size(), 3u);
  // A: p = 1/4, 2/4, 3/4, 1 -> TTS 16.0, 6.64, 3.32, 1; B: 10 everywhere.
  // Nearest rank on 4 instances: q = 0.25 -> 1st, 0.5 -> 2nd, ~1 -> 4th.
  EXPECT_EQ(rows[0].tts.value, 1.0);
  EXPECT_EQ(rows[0].params_digest, "A");
  EXPECT_NEAR(rows[1].tts.value, bench::time_to_target(0.75, 1.0), 1e-12);
  EXPECT_EQ(rows[2].params_digest, "B");
  EXPECT_EQ(rows[2].tts.value, 10.0);
  EXPECT_EQ(bench::summarize(recs, opt)[1].tts.ci_hi, rows[1].tts.ci_hi);  // deterministic
}

TEST(Bench, SummaryMarksAbsentQuantiles) {
  std::vector<bench::BenchmarkRecord> recs;
  for (int i = 0; i < 4; ++i) {
    bench::BenchmarkRecord r;
    r.instance_id = std::to_string(i);
    r.algorithm = "qmc";
    r.N = 32;
    r.success = i < 2;
    r.run_seconds = 2.0;
    recs.push_back(r);
  }
  bench::SummaryOptions opt;
  opt.quantiles = {0.5, 0.75};
  opt.n_boot = 20;
  auto csv = bench::summary_csv(bench::summarize(recs, opt));
  EXPECT_EQ(csv, "N,quantile,tts_seconds,ci_lo,ci_hi,algorithm\n"
                 "32,0.5,2,2,absent,qmc\n"
                 "32,0.75,absent,2,absent,qmc\n");
}
