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
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"
#include "tunnelbench/parallel.hpp"
#include "tunnelbench/random.hpp"
#include "tunnelbench/stats.hpp"

namespace tunnelbench {

enum class BetaInterpolation { linear, geometric };
enum class SweepOrder { sequential, random };

/// Inverse-temperature ramp for simulated annealing, in units of 1/J.
struct SaSchedule {
  double beta_init = 0.1;
  double beta_final = 3.0;
  std::size_t n_sweeps = 1000;
  BetaInterpolation interpolation = BetaInterpolation::linear;
  SweepOrder order = SweepOrder::sequential;

  void validate() const {
    if (!(beta_init >= 0.0) || !(beta_final >= beta_init))
      throw InputError("SA schedule needs 0 <= beta_init <= beta_final");
    if (n_sweeps < 1) throw InputError("SA schedule needs n_sweeps >= 1");
    if (interpolation == BetaInterpolation::geometric && beta_init <= 0.0)
      throw InputError("geometric SA schedule needs beta_init > 0");
  }

  /// beta used during sweep i (0-based); a single sweep runs at beta_final.
  double beta_at(std::size_t i) const {
    if (n_sweeps == 1) return beta_final;
    const double f = static_cast<double>(i) / static_cast<double>(n_sweeps - 1);
    if (interpolation == BetaInterpolation::linear)
      return beta_init + (beta_final - beta_init) * f;
    return beta_init * std::pow(beta_final / beta_init, f);
  }
};

/// State a single-spin-flip annealer needs. energy() is the tracked energy
/// (sum of applied deltas); callers recompute exactly when reporting.
template <class M>
concept AnnealModel = requires(M& m, const M& cm, std::size_t j, Rng& rng) {
  { cm.size() } -> std::convertible_to<std::size_t>;
  { cm.delta(j) } -> std::convertible_to<double>;
  { cm.energy() } -> std::convertible_to<double>;
  { cm.state() } -> std::convertible_to<const SpinConfig&>;
  m.flip(j);
  m.randomize(rng);
};

/// Tracks the lowest-energy state seen during a walk. The state is copied
/// lazily, only when a move leaves a record state uphill or sideways.
class BestTracker {
 public:
  template <AnnealModel M>
  explicit BestTracker(const M& model)
      : best_(model.state()),
        energy_(model.energy()),
        eps_(1e-12 * std::max(1.0, std::abs(model.energy()))) {}

  template <AnnealModel M>
  void before_flip(const M& model, double delta) {
    if (at_record_ && delta >= 0.0) {
      best_ = model.state();
      at_record_ = false;
    }
  }

  template <AnnealModel M>
  void after_flip(const M& model) {
    if (model.energy() < energy_ - eps_) {
      energy_ = model.energy();
      at_record_ = true;
    }
  }

  template <AnnealModel M>
  SpinConfig take(const M& model) {
    if (at_record_) best_ = model.state();
    return std::move(best_);
  }

 private:
  SpinConfig best_;
  double energy_;
  double eps_;
  bool at_record_ = true;
};

struct NoTracker {
  template <class M>
  void before_flip(const M&, double) {}
  template <class M>
  void after_flip(const M&) {}
};

/// One Metropolis sweep at inverse temperature beta: every spin is offered a
/// flip once, accepted with probability min(1, exp(-beta dE)). Returns the
/// number of accepted flips.
template <AnnealModel M, class Tracker = NoTracker>
std::size_t metropolis_sweep(M& model, double beta, Rng& rng,
                             SweepOrder order = SweepOrder::sequential,
                             std::vector<std::size_t>* perm = nullptr, Tracker&& tracker = {}) {
  const auto n = model.size();
  std::size_t accepted = 0;
  auto visit = [&](std::size_t j) {
    const double d = model.delta(j);
    if (d > 0.0 && uniform01(rng) >= std::exp(-beta * d)) return;
    tracker.before_flip(model, d);
    model.flip(j);
    tracker.after_flip(model);
    ++accepted;
  };
  if (order == SweepOrder::sequential) {
    for (std::size_t j = 0; j < n; ++j) visit(j);
  } else {
    std::vector<std::size_t> local;
    auto& p = perm ? *perm : local;
    if (p.size() != n) {
      p.resize(n);
      std::iota(p.begin(), p.end(), std::size_t{0});
    }
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_index(rng, i)]);
    for (auto j : p) visit(j);
  }
  return accepted;
}

/// Simulated annealing of `model`, by default from a uniform random start.
/// Returns the lowest-energy configuration visited.
template <AnnealModel M>
SpinConfig anneal(M& model, const SaSchedule& schedule, Rng& rng, bool random_start = true) {
  schedule.validate();
  if (random_start) model.randomize(rng);
  BestTracker tracker(model);
  std::vector<std::size_t> perm;
  for (std::size_t sweep = 0; sweep < schedule.n_sweeps; ++sweep)
    metropolis_sweep(model, schedule.beta_at(sweep), rng, schedule.order, &perm, tracker);
  return tracker.take(model);
}

/// Annealing model for an IsingProblem. 2-local problems keep incremental
/// local fields; K-local problems evaluate deltas over incident terms.
class IsingAnnealModel {
 public:
  explicit IsingAnnealModel(const IsingProblem& problem, const CouplingGraph* graph = nullptr)
      : problem_(&problem), graph_(graph), s_(problem.size(), Spin{1}) {
    if (!graph_ && problem.is_two_local()) {
      own_graph_ = CouplingGraph::from(problem);
      graph_ = &own_graph_;
    }
    if (graph_) local_.assign(problem.size(), 0.0);
  }
  IsingAnnealModel(const IsingAnnealModel&) = delete;
  IsingAnnealModel& operator=(const IsingAnnealModel&) = delete;

  std::size_t size() const noexcept { return s_.size(); }
  const SpinConfig& state() const noexcept { return s_; }
  double energy() const noexcept { return energy_; }

  void randomize(Rng& rng) {
    for (auto& v : s_) v = random_spin(rng);
    set_state(s_);
  }

  void set_state(std::span<const Spin> s) {
    problem_->check_length(s.size());
    if (s.data() != s_.data()) s_.assign(s.begin(), s.end());
    energy_ = problem_->energy(s_);
    if (graph_)
      for (VarIndex j = 0; j < s_.size(); ++j) local_[j] = graph_->local_field(s_, j);
  }

  double delta(std::size_t j) const noexcept {
    if (graph_) return 2.0 * s_[j] * local_[j];
    return problem_->flip_delta(s_, static_cast<VarIndex>(j));
  }

  void flip(std::size_t j) noexcept {
    energy_ += delta(j);
    s_[j] = static_cast<Spin>(-s_[j]);
    if (graph_) {
      const double twice = 2.0 * s_[j];
      for (auto e = graph_->offsets[j]; e < graph_->offsets[j + 1]; ++e)
        local_[graph_->neighbor[e]] += twice * graph_->coupling[e];
    }
  }

 private:
  const IsingProblem* problem_;
  const CouplingGraph* graph_;
  CouplingGraph own_graph_;
  SpinConfig s_;
  std::vector<double> local_;
  double energy_ = 0.0;
};

struct SaResult {
  SpinConfig config;
  double energy = 0.0;
};

inline SaResult sa_run(const IsingProblem& problem, const SaSchedule& schedule,
                       std::uint64_t seed, const CouplingGraph* graph = nullptr) {
  IsingAnnealModel model(problem, graph);
  Rng rng(seed);
  auto best = anneal(model, schedule, rng);
  const double e = problem.energy(best);
  return {std::move(best), e};
}

/// Fraction of independent SA runs reaching energy <= target + 1e-9.
inline SuccessEstimate sa_success_probability(const IsingProblem& problem,
                                              const SaSchedule& schedule, std::size_t n_runs,
                                              std::uint64_t seed, double target_energy,
                                              std::size_t workers = 1) {
  schedule.validate();
  CouplingGraph graph;
  const CouplingGraph* gp = nullptr;
  if (problem.is_two_local()) {
    graph = CouplingGraph::from(problem);
    gp = &graph;
  }
  return success_probability(
      n_runs, seed,
      [&](std::uint64_t s) { return sa_run(problem, schedule, s, gp).energy <= target_energy + 1e-9; },
      workers);
}

struct SaGrid {
  std::vector<std::size_t> sweeps;
  std::vector<std::pair<double, double>> betas;  // (beta_init, beta_final)
  BetaInterpolation interpolation = BetaInterpolation::linear;

  std::vector<SaSchedule> points() const {
    std::vector<SaSchedule> out;
    for (auto ns : sweeps)
      for (auto [b0, b1] : betas) out.push_back({b0, b1, ns, interpolation, SweepOrder::sequential});
    return out;
  }
};

struct SaTunePoint {
  SaSchedule schedule;
  std::vector<double> p_hat;      // per instance
  double quantile_effort = 0.0;   // spin updates; infinite when absent
};

struct SaTuneResult {
  SaSchedule schedule;
  double effort = 0.0;
  std::size_t best_index = 0;
  std::vector<SaTunePoint> grid;
};

/// Effort in spin updates to reach 99% success: n_sweeps * N * runs.
inline double sa_effort_updates(std::size_t n_sweeps, std::size_t n, double p) {
  return static_cast<double>(n_sweeps) * static_cast<double>(n) * runs_to_target(p);
}

/// Grid search minimizing the q-quantile over instances of the estimated
/// effort. estimate(i, schedule) returns p-hat for instance i. Ties go to
/// fewer sweeps, then to the earlier grid point.
template <class Estimator>
SaTuneResult sa_tune_with(std::span<const std::size_t> sizes, double q, const SaGrid& grid,
                          Estimator&& estimate) {
  if (sizes.empty()) throw InputError("sa_tune needs at least one instance");
  const auto points = grid.points();
  if (points.empty()) throw InputError("sa_tune grid is empty");
  SaTuneResult res;
  res.effort = infinity;
  double max_p = -1.0;
  std::size_t max_p_index = 0;
  for (std::size_t g = 0; g < points.size(); ++g) {
    SaTunePoint pt{points[g], {}, 0.0};
    std::vector<double> effort;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double p = estimate(i, points[g]);
      pt.p_hat.push_back(p);
      effort.push_back(sa_effort_updates(points[g].n_sweeps, sizes[i], p));
      if (p > max_p) {
        max_p = p;
        max_p_index = g;
      }
    }
    pt.quantile_effort = nearest_rank_quantile(effort, q);
    const bool better =
        pt.quantile_effort < res.effort ||
        (pt.quantile_effort == res.effort && std::isfinite(res.effort) &&
         points[g].n_sweeps < res.schedule.n_sweeps);
    if (better) {
      res.effort = pt.quantile_effort;
      res.schedule = points[g];
      res.best_index = g;
    }
    res.grid.push_back(std::move(pt));
  }
  if (!std::isfinite(res.effort)) {
    const auto& s = points[max_p_index];
    throw TuningFailure("SA tuning: no grid point reaches the target on the requested quantile; "
                        "largest p-hat " + std::to_string(std::max(max_p, 0.0)) +
                        " at n_sweeps=" + std::to_string(s.n_sweeps) +
                        ", beta=" + std::to_string(s.beta_init) + ".." + std::to_string(s.beta_final),
                        max_p_index, std::max(max_p, 0.0));
  }
  return res;
}

/// sa_tune for Ising instances with known target energies.
inline SaTuneResult sa_tune(std::span<const IsingProblem> instances,
                            std::span<const double> targets, double q, const SaGrid& grid,
                            std::size_t n_runs, std::uint64_t seed, std::size_t workers = 1) {
  if (instances.size() != targets.size()) throw InputError("one target per instance required");
  std::vector<std::size_t> sizes;
  for (const auto& p : instances) sizes.push_back(p.size());
  return sa_tune_with(sizes, q, grid, [&](std::size_t i, const SaSchedule& s) {
    return sa_success_probability(instances[i], s, n_runs, derive_seed(seed, i), targets[i],
                                  workers)
        .p;
  });
}

}  // namespace tunnelbench
