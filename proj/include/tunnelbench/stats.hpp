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
#include <cstdint>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "tunnelbench/constants.hpp"
#include "tunnelbench/error.hpp"
#include "tunnelbench/parallel.hpp"
#include "tunnelbench/random.hpp"

namespace tunnelbench {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Estimated success probability with its binomial standard error.
struct SuccessEstimate {
  double p = 0.0;
  double std_error = 0.0;
  std::size_t runs = 0;
  std::size_t successes = 0;
};

inline SuccessEstimate make_estimate(std::size_t successes, std::size_t runs) {
  SuccessEstimate e;
  e.runs = runs;
  e.successes = successes;
  e.p = runs ? static_cast<double>(successes) / static_cast<double>(runs) : 0.0;
  e.std_error = runs ? std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(runs)) : 0.0;
  return e;
}

/// Whole number of independent runs needed to succeed at least once with
/// probability `target`: ceil(ln(1-target)/ln(1-p)), at least 1, infinite at p=0.
inline double runs_to_target(double p, double target = constants::target_success) {
  if (!(p > 0.0)) return infinity;
  if (p >= target) return 1.0;
  return std::max(1.0, std::ceil(std::log1p(-target) / std::log1p(-p)));
}

/// Nearest-rank empirical quantile: the ceil(q*n)-th smallest value.
/// Infinite entries sort last, so an infinite result means "absent".
inline double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0) && q != 1.0) throw InputError("quantile level must be in (0,1]");
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size()) - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   values.end());
  return values[rank - 1];
}

/// Estimates the success probability of `run(seed_r)` over n_runs derived
/// seeds; run returns true on success.
template <class RunFn>
SuccessEstimate success_probability(std::size_t n_runs, std::uint64_t seed, RunFn&& run,
                                    std::size_t workers = 1) {
  if (n_runs < 1) throw InputError("n_runs must be >= 1");
  std::vector<char> ok(n_runs, 0);
  parallel_for(n_runs, workers, [&](std::size_t r) { ok[r] = run(derive_seed(seed, r)) ? 1 : 0; });
  return make_estimate(static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), n_runs);
}

inline double median(std::vector<double> values) {
  return nearest_rank_quantile(std::move(values), 0.5);
}

}  // namespace tunnelbench
