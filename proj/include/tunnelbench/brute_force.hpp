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

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"

namespace tunnelbench {

struct GroundState {
  SpinConfig config;
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
};

inline constexpr std::size_t brute_force_max_variables = 28;

/// Energies closer than this are treated as equal.
inline constexpr double energy_tolerance = 1e-9;

/// Exact global minimum by Gray-code enumeration of all 2^n configurations.
/// The representative of a degenerate minimum is the lexicographically
/// smallest configuration (-1 < +1, variable 0 most significant).
inline GroundState brute_force_ground_state(const IsingProblem& problem) {
  const auto n = problem.size();
  if (n > brute_force_max_variables)
    throw InputError("brute force refused: n=" + std::to_string(n) + " exceeds " +
                     std::to_string(brute_force_max_variables));

  SpinConfig s(n, Spin{-1});
  GroundState best{s, problem.energy(s), 1};
  if (n == 0) return best;

  double e = best.energy;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto j = static_cast<VarIndex>(std::countr_zero(i));
    e += problem.flip_delta(s, j);
    s[j] = static_cast<Spin>(-s[j]);
    if ((i & 0xffff) == 0) e = problem.energy(s);  // bound the drift
    if (e > best.energy + 1e-6) continue;
    e = problem.energy(s);
    if (e < best.energy - energy_tolerance) {
      best.energy = e;
      best.config = s;
      best.degeneracy = 1;
    } else if (std::abs(e - best.energy) <= energy_tolerance) {
      ++best.degeneracy;
      if (std::lexicographical_compare(s.begin(), s.end(), best.config.begin(),
                                       best.config.end()))
        best.config = s;
    }
  }
  best.energy = problem.energy(best.config);
  return best;
}

}  // namespace tunnelbench
