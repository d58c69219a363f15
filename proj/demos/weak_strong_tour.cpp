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

// Short tour over the weak-strong pair: landscape, gap, SA vs QMC, and a
// closed-system anneal. Runs in well under a minute.

#include <cstdio>

#include "tunnelbench/tunnelbench.hpp"

using namespace tunnelbench;

int main() {
  const auto pair = weak_strong_pair();
  const auto gs = brute_force_ground_state(pair);
  SpinConfig false_min(16, Spin{-1});
  for (int j = 0; j < 8; ++j) false_min[j] = 1;
  std::printf("pair: ground %.2f (degeneracy %llu), false minimum %.2f\n", gs.energy,
              static_cast<unsigned long long>(gs.degeneracy), pair.energy(false_min));

  const auto sched = load_schedule("dw2x-approx");
  const auto space = quantum::evolution_space(pair);
  const auto sp = quantum::spectrum_vs_s(space, sched, 3, quantum::uniform_grid(0.0, 1.0, 41));
  std::printf("dw2x-approx: min gap %.3f GHz at s=%.3f, second gap there %.3f GHz\n", sp.gap_min,
              sp.s_at_gap_min, sp.second_gap_at_min);

  // SA from a hot start finds the pair easily; a cold start sits in the false minimum.
  for (auto [b0, b1] : {std::pair{0.1, 3.0}, std::pair{3.0, 3.0}}) {
    SaSchedule s{b0, b1, 200, BetaInterpolation::linear, SweepOrder::sequential};
    const auto p = sa_success_probability(pair, s, 400, 11, gs.energy);
    std::printf("SA beta %.1f..%.1f, 200 sweeps: p0 = %.3f, TTS = %.3g s\n", b0, b1, p.p,
                bench::time_to_target(p.p, bench::sa_effort_seconds(200, 16)));
  }

  QmcParams q;
  q.beta = 10.0;
  q.trotter = 32;
  q.n_sweeps = 2000;
  const auto pq = qmc_success_probability(pair, sched, q, 100, 12, gs.energy);
  std::printf("QMC beta 10, M 32, 2000 sweeps: p0 = %.3f, TTS = %.3g s\n", pq.p,
              bench::time_to_target(pq.p, bench::qmc_effort_seconds(2000, 16, 10.0, "dw2x")));

  for (double T : {5.0, 20.0, 50.0}) {
    const double p0 = quantum::final_ground_population({pair, sched}, T);
    std::printf("closed-system anneal T_QA = %4.0f ns: P0 = %.4f\n", T, p0);
  }

  const auto inst = npp::make_instance({4, 5, 6, 7, 8});
  std::printf("NPP {4,5,6,7,8}: greedy %s, KK %s, exact %s\n", npp::greedy_partition(inst).E.str().c_str(),
              npp::kk_partition(inst).E.str().c_str(), npp::npp_brute_force(inst).E.str().c_str());
  return 0;
}
