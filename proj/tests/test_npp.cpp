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

#include <cmath>
#include <filesystem>
#include <numbers>

#include "tunnelbench/npp.hpp"

namespace tb = tunnelbench;
namespace npp = tunnelbench::npp;

namespace {

npp::NppInstance worked() { return npp::make_instance({4, 5, 6, 7, 8}); }

// Naive enumeration of all 2^N configurations.
npp::BigInt naive_min(const npp::NppInstance& inst) {
  const std::size_t n = inst.size();
  npp::BigInt best = -1;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    tb::SpinConfig s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = (m >> j & 1) ? 1 : -1;
    auto e = npp::residue(inst, s).E;
    if (best < 0 || e < best) best = e;
  }
  return best;
}

}  // namespace

TEST(Npp, GenerateRangeAndReproducibility) {
  auto inst = npp::generate_npp(5, 4, 17);
  ASSERT_EQ(inst.size(), 5u);
  for (const auto& x : inst.a) {
    EXPECT_GE(x, 1);
    EXPECT_LT(x, 16);
  }
  EXPECT_EQ(npp::generate_npp(5, 4, 17).a, inst.a);
  EXPECT_NE(npp::generate_npp(5, 4, 18).a, inst.a);
  auto wide = npp::generate_npp(4, 130, 3);
  for (const auto& x : wide.a) EXPECT_LT(x, npp::BigInt(1) << 130);
  EXPECT_NO_THROW(wide.validate());
  EXPECT_THROW(npp::generate_npp(1, 4, 1), tb::InputError);
}

TEST(Npp, MeanSquareMoment) {
  // <a^2> of uniform integers on [1, 2^b) is about 2^(2b)/3; real units 1/3.
  double sum = 0.0, sum2 = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    const double m = npp::generate_npp(50, 40, tb::derive_seed(9, i)).mean_square_real();
    sum += m;
    sum2 += m * m;
  }
  const double mean = sum / n, sd = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, 1.0 / 3.0, 3 * sd);
}

TEST(Npp, ResidueExamples) {
  auto inst = worked();
  auto p = npp::residue(inst, {1, 1, 1, -1, -1});
  EXPECT_EQ(p.omega, 0);
  EXPECT_EQ(p.E, 0);
  EXPECT_EQ(npp::residue(inst, {1, 1, 1, 1, 1}).omega, 30);
  auto g = npp::residue(inst, {1, -1, 1, 1, -1});
  auto f = npp::residue(inst, {-1, 1, -1, -1, 1});
  EXPECT_EQ(g.omega, -f.omega);
  EXPECT_EQ(g.E, f.E);
  EXPECT_THROW(npp::residue(inst, {1, 1}), tb::InputError);
}

TEST(Npp, WorkedExampleHeuristics) {
  auto inst = worked();
  EXPECT_EQ(npp::greedy_partition(inst).E, 4);
  EXPECT_EQ(npp::kk_partition(inst).E, 2);
  EXPECT_EQ(npp::npp_brute_force(inst).E, 0);
  EXPECT_EQ(npp::greedy_partition(npp::make_instance({1, 1})).E, 0);
  EXPECT_EQ(npp::kk_partition(npp::make_instance({9})).E, 9);
  EXPECT_EQ(npp::npp_brute_force(npp::make_instance({1})).E, 1);
  EXPECT_EQ(npp::npp_brute_force(npp::make_instance({8, 4, 4})).E, 0);
  EXPECT_EQ(npp::kk_partition(npp::make_instance({8, 4, 4})).E, 0);
}

TEST(Npp, KkColouringSelfConsistent) {
  for (int i = 0; i < 50; ++i) {
    auto inst = npp::generate_npp(3 + i % 40, 20 + i, tb::derive_seed(4, i));
    EXPECT_NO_THROW(npp::kk_partition(inst));  // throws if the colouring disagrees
  }
}

TEST(Npp, BruteForceMatchesEnumeration) {
  for (int i = 0; i < 30; ++i) {
    auto inst = npp::generate_npp(2 + i % 13, 12, tb::derive_seed(5, i));
    EXPECT_EQ(npp::npp_brute_force(inst).E, naive_min(inst)) << "instance " << i;
  }
  // Wide numbers take the arbitrary-precision path.
  for (int i = 0; i < 5; ++i) {
    auto inst = npp::generate_npp(10, 70, tb::derive_seed(6, i));
    EXPECT_EQ(npp::npp_brute_force(inst).E, naive_min(inst));
  }
  EXPECT_THROW(npp::npp_brute_force(npp::generate_npp(31, 31, 1)), tb::InputError);
}

TEST(Npp, AlgorithmicTunnellingTrace) {
  auto inst = worked();
  tb::SpinConfig start(5, 1);
  npp::AtOptions opt;
  opt.kappa = 1;
  auto r = npp::algorithmic_tunneling(inst, 0, opt, &start);
  EXPECT_TRUE(r.local_minimum);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LT(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.trace.back(), r.partition.E);
  // 1-flip local minimum.
  for (std::size_t j = 0; j < 5; ++j) {
    auto s = r.partition.config;
    s[j] = static_cast<tb::Spin>(-s[j]);
    EXPECT_GE(npp::residue(inst, s).E, r.partition.E);
  }
}

TEST(Npp, AlgorithmicTunnellingFullNeighbourhood) {
  // With groups of up to N bits every configuration is one step away.
  for (int i = 0; i < 10; ++i) {
    auto inst = npp::generate_npp(6, 16, tb::derive_seed(7, i));
    npp::AtOptions opt;
    opt.kappa = 6;
    opt.at_most = true;
    auto r = npp::algorithmic_tunneling(inst, i, opt);
    EXPECT_LE(r.steps, 1u);
    EXPECT_EQ(r.partition.E, naive_min(inst));
  }
}

TEST(Npp, AlgorithmicTunnellingGuardAndPairedComparison) {
  auto inst = npp::generate_npp(18, 18, 1);
  npp::AtOptions big;
  big.kappa = 7;
  try {
    npp::algorithmic_tunneling(inst, 1, big);
    FAIL() << "expected refusal";
  } catch (const tb::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("group evaluations"), std::string::npos);
  }
  std::vector<double> e1, e2;
  for (int i = 0; i < 200; ++i) {
    auto in = npp::generate_npp(18, 18, tb::derive_seed(8, i));
    npp::AtOptions o1, o2;
    o1.kappa = 1;
    o2.kappa = 2;
    e1.push_back(npp::algorithmic_tunneling(in, i, o1).partition.E.convert_to<double>());
    e2.push_back(npp::algorithmic_tunneling(in, i, o2).partition.E.convert_to<double>());
  }
  EXPECT_LE(tb::median(e2), tb::median(e1));
}

TEST(Npp, PredictionsMatchHandEvaluation) {
  auto p = npp::predict_stats(20, 1.0 / 3.0, 2);
  EXPECT_NEAR(p.P_kappa_00, 1.0 / std::sqrt(8 * std::numbers::pi * 2.0 / 3.0), 1e-15);
  EXPECT_NEAR(p.P_kappa_00, 0.2443, 1e-4);
  EXPECT_NEAR(p.E_AT, 0.01134, 1e-5);
  EXPECT_NEAR(p.mean_E, std::sqrt(2 * 20 / (3 * std::numbers::pi)), 1e-14);
  EXPECT_NEAR(p.E_min_median, p.mean_E / 1048576.0, 1e-20);
  EXPECT_NEAR(p.q, 0.8, 1e-15);
  auto half = npp::predict_stats(20, 0.7, 10);
  EXPECT_EQ(half.q, 0.0);
  EXPECT_NEAR(half.sigma_q, 0.7, 1e-15);
  auto nk = npp::predict_stats(100, 1.0, 8, 0.72);
  EXPECT_NEAR(nk.N_kappa, 22735, 22735 * 1e-3);
  EXPECT_NEAR(nk.E_ratio_vs_KK, std::pow(100.0, 0.72 * std::log2(100.0) - 8) * std::pow(8.0, 8) * std::exp(-8.0), 1e-12);
  EXPECT_NEAR(npp::kappa_c(16), 1 - 4.0 / 32, 1e-15);
}

TEST(Npp, DensitiesNormalize) {
  // The lattice density integrates to 2 (residues on every other integer).
  double s = 0.0;
  for (double w = -50; w <= 50; w += 0.01) s += npp::residue_density(w, 20, 1.0 / 3.0) * 0.01;
  EXPECT_NEAR(s, 2.0, 1e-6);
  double c = 0.0;
  for (double w = -50; w <= 50; w += 0.01) c += npp::conditional_density(w, 1.0, 20, 0.5, 3) * 0.01;
  EXPECT_NEAR(c, 1.0, 1e-6);
}

TEST(Npp, ResidueStatistics) {
  auto ks = npp::residue_gaussian_ks(24, 20000, 3);
  EXPECT_GT(ks.p_value, 0.01);
  // A wrong reference distribution is rejected.
  std::vector<double> shifted;
  tb::Rng rng(2);
  std::normal_distribution<double> nd(0.1, 1.0);
  for (int i = 0; i < 20000; ++i) shifted.push_back(nd(rng));
  EXPECT_LT(npp::ks_standard_normal(shifted).p_value, 0.01);
  EXPECT_NEAR(npp::kolmogorov_q(1.36), 0.049, 1e-3);
  // Mean E of random configurations vs sqrt(2 <a^2> N / pi).
  auto inst = npp::generate_npp(24, 24, 5);
  tb::Rng r2(6);
  double sum = 0, sum2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    tb::SpinConfig s(24);
    for (auto& v : s) v = tb::random_spin(r2);
    const double e = npp::residue(inst, s).E_real(24);
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, npp::predict_stats(24, inst.mean_square_real(), 1).mean_E, 3 * se);
}

TEST(Npp, AnnealModelDeltas) {
  auto inst = npp::generate_npp(12, 12, 3);
  npp::NppAnnealModel m(inst);
  tb::Rng rng(1);
  m.randomize(rng);
  for (int k = 0; k < 100; ++k) {
    const std::size_t j = tb::uniform_index(rng, 12);
    const double before = m.energy(), d = m.delta(j);
    m.flip(j);
    EXPECT_NEAR(m.energy(), before + d, 1e-12);
    EXPECT_NEAR(m.energy(), npp::residue(inst, m.state()).E_real(12), 1e-15);
  }
  tb::SaSchedule sch;
  sch.beta_init = 1;
  sch.beta_final = 1e4;
  sch.interpolation = tb::BetaInterpolation::geometric;
  sch.n_sweeps = 2000;
  auto target = npp::npp_brute_force(inst).E;
  EXPECT_GT(npp::npp_sa_success_probability(inst, sch, 20, 3, target).p, 0.0);
}

TEST(Npp, JsonRoundTrip) {
  auto inst = npp::generate_npp(20, 90, 11);
  auto back = npp::npp_instance_from_json(npp::to_json(inst));
  EXPECT_EQ(back.a, inst.a);
  EXPECT_EQ(back.b, 90u);
  EXPECT_EQ(back.seed, inst.seed);
  auto path = std::filesystem::temp_directory_path() / "tb_npp_roundtrip.json";
  npp::write_npp_instance(path.string(), inst);
  EXPECT_EQ(npp::read_npp_instance(path.string()).a, inst.a);
  std::filesystem::remove(path);
  auto bad = npp::to_json(inst);
  bad["a"][0] = "12x";
  EXPECT_THROW(npp::npp_instance_from_json(bad), tb::InputError);
  bad = npp::to_json(inst);
  bad["N"] = 3;
  EXPECT_THROW(npp::npp_instance_from_json(bad), tb::InputError);
  bad = npp::to_json(inst);
  bad["b"] = 5;
  EXPECT_THROW(npp::npp_instance_from_json(bad), tb::InputError);
}
