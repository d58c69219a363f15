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
#include <numbers>

#include "tunnelbench/brute_force.hpp"
#include "tunnelbench/generators.hpp"
#include "tunnelbench/quantum.hpp"

namespace tb = tunnelbench;
namespace q = tunnelbench::quantum;

namespace {

// Dense H(A, B) in the full basis, built independently of the spaces.
Eigen::MatrixXd dense_hamiltonian(const tb::IsingProblem& p, double A, double B) {
  const std::size_t n = p.size(), dim = std::size_t{1} << n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) {
    H(x, x) = B * p.energy(q::config_of(x, n));
    for (std::size_t j = 0; j < n; ++j) H(x ^ (std::size_t{1} << j), x) -= A;
  }
  return H;
}

}  // namespace

TEST(Spaces, FullSpaceMatchesDense) {
  auto p = tb::random_ising({6, tb::Topology::complete, 1, 1, tb::CouplingSet::gaussian, true}, 2);
  q::FullSpace fs(p);
  auto H = dense_hamiltonian(p, 0.7, 1.3);
  Eigen::VectorXd v = Eigen::VectorXd::Random(64), out(64);
  q::apply_hamiltonian(fs, 0.7, 1.3, v.data(), out.data());
  EXPECT_LT((out - H * v).norm(), 1e-12);
}

TEST(Spaces, PairSectorIsSymmetricAndExact) {
  auto p = tb::weak_strong_pair();
  auto gens = q::find_symmetry_generators(p);
  EXPECT_FALSE(gens.empty());
  q::SymmetricSector sec(p, gens);
  EXPECT_EQ(sec.dim(), 875u);
  std::size_t total = 0;
  for (std::size_t o = 0; o < sec.dim(); ++o) total += sec.orbit_size(o);
  EXPECT_EQ(total, 65536u);
  for (std::size_t a = 0; a < sec.dim(); a += 7)
    for (std::size_t b = 0; b < sec.dim(); b += 5) EXPECT_NEAR(sec.x_element(a, b), sec.x_element(b, a), 1e-12);
  // Lowest sector levels equal the lowest full-space levels (ground and the
  // tunnelling partner are symmetric).
  q::FullSpace fs(p);
  for (double A : {0.5, 2.0, 5.0}) {
    auto full = q::instantaneous_eigenpairs(fs, A, 1.0, 2);
    auto red = q::instantaneous_eigenpairs(sec, A, 1.0, 2);
    EXPECT_NEAR(full.values[0], red.values[0], 1e-8);
    // The sector ground state embedded back into the full space matches.
    Eigen::VectorXd emb(65536);
    for (std::size_t x = 0; x < 65536; ++x) {
      const auto o = sec.orbit_of(x);
      emb[x] = red.vectors(o, 0) / std::sqrt(double(sec.orbit_size(o)));
    }
    EXPECT_NEAR(std::abs(emb.dot(full.vectors.col(0))), 1.0, 1e-8);
  }
}

TEST(Lanczos, MatchesDenseOnSmallSystems) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto p = tb::random_ising({10, tb::Topology::complete, 1, 1, tb::CouplingSet::gaussian, true}, seed);
    q::FullSpace fs(p);
    for (double A : {0.2, 1.0, 3.0}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(p, A, 0.8));
      q::EigenOptions opt;
      opt.dense_below = 0;  // force the iterative path
      auto r = q::instantaneous_eigenpairs(fs, A, 0.8, 4, opt);
      for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.values[i], es.eigenvalues()[i], 1e-8);
    }
  }
}

TEST(Lanczos, RecoversDegenerateLevels) {
  // Uncoupled spins in a transverse field: levels -nA, then -(n-2)A n-fold.
  tb::IsingProblem p(10, {{{0}, 0.0}});
  tb::IsingProblem tiny(10, {{{0, 1}, 1e-300}});
  q::FullSpace fs(tiny);
  q::EigenOptions opt;
  opt.dense_below = 0;
  auto r = q::instantaneous_eigenpairs(fs, 1.0, 0.0, 5, opt);
  EXPECT_NEAR(r.values[0], -10.0, 1e-8);
  for (int i = 1; i < 5; ++i) EXPECT_NEAR(r.values[i], -8.0, 1e-8);
}

TEST(Spectrum, EndpointsAndSingleSpin) {
  auto p = tb::weak_strong_pair();
  q::FullSpace fs(p);
  auto lin = tb::AnnealSchedule::linear(1.0, 2.0);
  auto sp = q::spectrum_vs_s(fs, lin, 3, {1.0});
  auto diag = fs.diagonal();
  std::sort(diag.begin(), diag.end());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sp.points[0].levels[i], 2.0 * diag[i], 1e-9);
  tb::IsingProblem one(1, {{{0}, 1.0}});
  q::FullSpace f1(one);
  auto r = q::instantaneous_eigenpairs(f1, 1.0, 0.0, 2);
  EXPECT_NEAR(r.values[0], -1.0, 1e-12);
  EXPECT_NEAR(r.values[1], 1.0, 1e-12);
}

TEST(Spectrum, GapRefinementAndCsv) {
  tb::IsingProblem p(2, {{{0, 1}, 1.0}});
  q::FullSpace fs(p);
  auto sp = q::spectrum_vs_s(fs, tb::AnnealSchedule::linear(), 2, q::uniform_grid(0, 1, 11));
  EXPECT_EQ(sp.points.size(), 11u);
  auto csv = q::spectrum_to_csv(sp);
  EXPECT_EQ(csv.rfind("s,E0,E1\n", 0), 0u);
}

TEST(Evolve, StationaryDriverState) {
  auto p = tb::weak_strong_pair();
  tb::AnnealSchedule constant = tb::AnnealSchedule::tabulated({{0.0, 2.0, 0.0}, {1.0, 2.0, 0.0}});
  auto tr = q::schrodinger_evolve({p, constant}, 10.0, {0.0, 2.5, 5.0, 10.0});
  for (double v : tr.P0) EXPECT_NEAR(v, 1.0, 1e-9);
  EXPECT_LT(tr.max_norm_error, 1e-8);
}

TEST(Evolve, RabiPeriodFixesUnits) {
  // H = -A sigma^x with A = 1 GHz: |up> returns after 1/(2A) = 0.5 ns.
  tb::IsingProblem one(1, {{{0}, 0.0}});
  tb::IsingProblem p(1, {{{0}, 1e-300}});
  q::FullSpace fs(p);
  auto coeff = [](double) { return std::pair<double, double>{-1.0, 0.0}; };
  q::Propagator<q::FullSpace, decltype(coeff)> prop(fs, coeff);
  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  prop.advance(psi, 0.0, 0.25);
  EXPECT_NEAR(std::norm(psi[0]), 0.0, 1e-9);
  prop.advance(psi, 0.25, 0.5);
  EXPECT_NEAR(std::norm(psi[0]), 1.0, 1e-9);
  prop.advance(psi, 0.5, 0.125 + 0.5);
  EXPECT_NEAR(std::norm(psi[0]), 0.5, 1e-9);
}

TEST(Evolve, LandauZener) {
  // H = g X + alpha t D with D = diag(+-1): P_LZ = exp(-2 pi^2 g^2 / alpha).
  tb::IsingProblem p(1, {{{0}, -1.0}});
  q::FullSpace fs(p);
  const double g = 0.1, alpha = 1.0, T = 150.0;
  auto coeff = [&](double t) { return std::pair<double, double>{g, alpha * t}; };
  auto start = q::instantaneous_eigenpairs(fs, -g, -alpha * T, 1);
  Eigen::VectorXcd psi = start.vectors.col(0).cast<q::cplx>();
  auto tr = q::evolve_populations(fs, coeff, -T, psi, {T});
  const double lz = std::exp(-2 * std::numbers::pi * std::numbers::pi * g * g / alpha);
  EXPECT_NEAR(tr.P1.back(), lz, 1e-3);
  EXPECT_NEAR(tr.P0.back() + tr.P1.back(), 1.0, 1e-8);
}

TEST(Evolve, NormConservedOnPairAnneal) {
  auto tr = q::schrodinger_evolve({tb::weak_strong_pair(), tb::dw2x_approx_formula()}, 20.0,
                                  q::uniform_grid(0, 20.0, 11));
  EXPECT_LT(tr.max_norm_error, 1e-8);
  EXPECT_NEAR(tr.P0.front(), 1.0, 1e-9);
  for (std::size_t i = 0; i < tr.P0.size(); ++i) EXPECT_LE(tr.P0[i] + tr.P1[i], 1.0 + 1e-8);
}

TEST(Rate, DetailedBalanceFixedPoint) {
  q::RateModel m;
  const double kT = q::temperature_to_frequency(12.0);
  m.gap_GHz = [&](double) { return std::log(2.0) * kT; };
  m.w10_per_ns = [](double) { return 0.5; };
  m.T_QA_ns = 1000.0;
  auto tr = q::rate_evolve(m);
  EXPECT_NEAR(tr.p0.back(), 2.0 / 3.0, 1e-8);
  for (double v : tr.p0) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
}

TEST(Rate, FrozenWithoutTransitions) {
  q::RateModel m;
  m.gap_GHz = [](double) { return 0.1; };
  m.w10_per_ns = [](double) { return 0.0; };
  for (double v : q::rate_evolve(m).p0) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Rate, FreezesAboveEquilibriumAfterRatesCollapse) {
  // Gap closes to a minimum at s* then reopens; the rate collapses right
  // after s*, so the population freezes near its value at the crossing.
  q::RateModel m;
  const double s_star = 0.6;
  m.gap_GHz = [&](double s) { return 0.25 + 4.0 * (s - s_star) * (s - s_star); };
  m.w10_per_ns = q::decaying_rate(0.05, 80.0, s_star);
  m.temperature_mK = 12.0;
  m.T_QA_ns = 20000.0;
  auto tr = q::rate_evolve(m);
  const double kT = q::temperature_to_frequency(12.0);
  auto peq = [&](double s) { return 1.0 / (1.0 + std::exp(-m.gap_GHz(s) / kT)); };
  // Plateau: the last 20% of the anneal changes p0 by almost nothing...
  EXPECT_NEAR(tr.p0[80], tr.p0[100], 1e-3);
  // ...and stays well below the final equilibrium.
  EXPECT_LT(tr.p0.back(), peq(1.0) - 0.1);
}

TEST(Units, TemperatureToFrequency) {
  EXPECT_NEAR(q::temperature_to_frequency(15.0), 0.3125, 0.3125 * 1e-3);
  EXPECT_NEAR(q::temperature_to_frequency(15.0), 0.314, 0.314 * 0.01);
  EXPECT_NEAR(q::temperature_to_frequency(12.0), 0.2500, 1e-4);
  EXPECT_NEAR(q::temperature_to_frequency(4.8), 0.1000, 1e-4);
  EXPECT_NEAR(q::beta_from_temperature(4.8), 10.0, 0.01);
  EXPECT_THROW(q::temperature_to_frequency(0.0), tb::InputError);
}

TEST(Units, NoiseRescaling) {
  auto n = q::rescale_noise(2.5, 2.5);
  EXPECT_EQ(n.W_GHz, 0.661);
  EXPECT_EQ(n.eta, 0.12);
  auto h = q::rescale_noise(0.625, 2.5);
  EXPECT_NEAR(h.W_GHz, 0.3305, 1e-12);
  EXPECT_NEAR(h.eta, 0.03, 1e-12);
}
