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
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"
#include "tunnelbench/parallel.hpp"
#include "tunnelbench/random.hpp"
#include "tunnelbench/schedule.hpp"
#include "tunnelbench/stats.hpp"

namespace tunnelbench {

enum class Boundary { periodic, open };
enum class Readout { slice0, best_replica };

inline std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }
inline std::string to_string(Readout r) { return r == Readout::slice0 ? "slice0" : "best-replica"; }

inline Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw InputError("unknown boundary '" + s + "' (periodic|open)");
}

inline Readout readout_from_string(const std::string& s) {
  if (s == "slice0") return Readout::slice0;
  if (s == "best-replica") return Readout::best_replica;
  throw InputError("unknown readout '" + s + "' (slice0|best-replica)");
}

/// Coupling between neighbouring replicas, J_perp = -(1/2 beta) ln tanh(A beta / M).
/// Infinite at A = 0 (frozen worldline). beta in 1/GHz, A in GHz.
inline double replica_coupling(double A, double beta, std::size_t M) {
  if (!(beta > 0.0) || M < 1 || !(A >= 0.0))
    throw InputError("replica_coupling needs A >= 0, beta > 0, M >= 1");
  if (A == 0.0) return std::numeric_limits<double>::infinity();
  const double x = A * beta / static_cast<double>(M);
  // -ln tanh x = ln coth x; for large x use -ln(1 - 2/(e^{2x}+1)) without cancellation.
  const double t = std::tanh(x);
  const double v = t < 0.5 ? -std::log(t) : -std::log1p(-2.0 / (std::exp(2.0 * x) + 1.0));
  return v / (2.0 * beta);
}

/// Imaginary-time configuration: M replicas of n spins, stored per worldline
/// (spin j occupies sigma[j*M, (j+1)*M)).
struct WorldlineState {
  std::size_t n = 0;
  std::size_t M = 0;
  Boundary boundary = Boundary::periodic;
  double beta = 1.0;
  std::vector<Spin> sigma;

  WorldlineState() = default;
  WorldlineState(std::size_t n_, std::size_t M_, Boundary b, double beta_)
      : n(n_), M(M_), boundary(b), beta(beta_), sigma(n_ * M_, Spin{1}) {
    if (M < 1) throw InputError("Trotter number must be >= 1");
  }

  Spin& at(std::size_t j, std::size_t tau) { return sigma[j * M + tau]; }
  Spin at(std::size_t j, std::size_t tau) const { return sigma[j * M + tau]; }

  SpinConfig slice(std::size_t tau) const {
    SpinConfig s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = at(j, tau);
    return s;
  }
};

/// H_cl = -sum_tau [ (B/M) sum_terms J prod sigma(tau) + J_perp sum_j sigma_j(tau) sigma_j(tau+1) ],
/// with the tau = M -> 1 link dropped for open boundaries.
inline double effective_classical_energy(const IsingProblem& problem, const WorldlineState& st,
                                         double A, double B) {
  if (!problem.is_two_local())
    throw UnsupportedProblem("QMC supports 2-local problems only");
  problem.check_length(st.n);
  const double jperp = replica_coupling(A, st.beta, st.M);
  if (!std::isfinite(jperp)) throw InputError("effective energy undefined at A = 0 (infinite J_perp)");
  double spatial = 0.0;
  for (std::size_t tau = 0; tau < st.M; ++tau) spatial += problem.energy(st.slice(tau));
  double links = 0.0;
  const std::size_t nlinks = st.boundary == Boundary::periodic ? st.M : st.M - 1;
  for (std::size_t j = 0; j < st.n; ++j)
    for (std::size_t tau = 0; tau < nlinks; ++tau)
      links += st.at(j, tau) * st.at(j, (tau + 1) % st.M);
  return B / static_cast<double>(st.M) * spatial - jperp * links;
}

inline double effective_classical_energy(const IsingProblem& problem, const WorldlineState& st,
                                         const AnnealSchedule& schedule, double s) {
  const auto p = schedule.eval(s);
  return effective_classical_energy(problem, st, p.A, p.B);
}

/// Worldline Monte Carlo at fixed (A, B). An update picks a random replica
/// of spin j, grows a connected imaginary-time interval of equal spins by
/// adding each next neighbour with probability 1 - exp(-2 beta J_perp), and
/// accepts the interval flip with the Metropolis probability of the spatial
/// energy change.
class WorldlineSampler {
 public:
  WorldlineSampler(const IsingProblem& problem, std::size_t M, double beta, Boundary boundary)
      : graph_(CouplingGraph::from(problem)), state_(problem.size(), M, boundary, beta) {
    if (!(beta > 0.0)) throw InputError("QMC needs beta > 0");
    if (M < 2) throw InputError("QMC needs M >= 2 replicas");
  }

  const WorldlineState& state() const noexcept { return state_; }
  WorldlineState& state() noexcept { return state_; }
  const CouplingGraph& graph() const noexcept { return graph_; }

  void randomize(Rng& rng) {
    for (auto& v : state_.sigma) v = random_spin(rng);
  }

  void set_field(double A, double B) {
    if (!(A >= 0.0) || !(B >= 0.0)) throw InputError("schedule values must be non-negative");
    const double K = state_.beta * replica_coupling(A, state_.beta, state_.M);
    bond_ = std::isfinite(K) ? -std::expm1(-2.0 * K) : 1.0;
    spatial_beta_ = state_.beta * B / static_cast<double>(state_.M);
  }

  double bond_probability() const noexcept { return bond_; }

  /// One update attempt on worldline j; returns true if a flip was accepted.
  bool update(std::size_t j, Rng& rng) {
    const std::size_t M = state_.M;
    Spin* w = &state_.sigma[j * M];
    const std::size_t t0 = uniform_index(rng, M);
    const Spin v = w[t0];
    const bool periodic = state_.boundary == Boundary::periodic;
    // Extend forward then backward; lo/len describe the interval (mod M when periodic).
    std::size_t len = 1;
    while (len < M) {
      const std::size_t t = t0 + len;
      if (!periodic && t >= M) break;
      if (w[t % M] != v || !(bond_ >= 1.0 || uniform01(rng) < bond_)) break;
      ++len;
    }
    std::size_t back = 0;
    while (len + back < M) {
      if (!periodic && back + 1 > t0) break;
      const std::size_t t = (t0 + M - back - 1) % M;
      if (w[t] != v || !(bond_ >= 1.0 || uniform01(rng) < bond_)) break;
      ++back;
    }
    const std::size_t lo = (t0 + M - back) % M;
    len += back;
    double dE = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t t = (lo + i) % M;
      dE += local_field(j, t);
    }
    dE *= 2.0 * v * spatial_beta_;
    if (dE > 0.0 && uniform01(rng) >= std::exp(-dE)) return false;
    for (std::size_t i = 0; i < len; ++i) w[(lo + i) % M] = static_cast<Spin>(-v);
    return true;
  }

  /// Two update attempts per worldline, spins in index order.
  void sweep(Rng& rng) {
    for (std::size_t j = 0; j < state_.n; ++j) {
      update(j, rng);
      update(j, rng);
    }
  }

  double slice_energy(const IsingProblem& problem, std::size_t tau) const {
    return problem.energy(state_.slice(tau));
  }

 private:
  double local_field(std::size_t j, std::size_t tau) const {
    const std::size_t M = state_.M;
    double h = graph_.field[j];
    for (auto e = graph_.offsets[j]; e < graph_.offsets[j + 1]; ++e)
      h += graph_.coupling[e] * state_.sigma[graph_.neighbor[e] * M + tau];
    return h;
  }

  CouplingGraph graph_;
  WorldlineState state_;
  double bond_ = 0.0;
  double spatial_beta_ = 0.0;
};

struct QmcParams {
  double beta = 10.0;           // 1/GHz
  std::size_t trotter = 64;     // M
  std::size_t n_sweeps = 1000;
  Boundary boundary = Boundary::periodic;
  Readout readout = Readout::slice0;
};

struct QmcResult {
  SpinConfig config;
  double energy = 0.0;
};

/// Schedule-driven anneal: sweep i (1-based) runs at s = i / n_sweeps.
inline QmcResult qmc_anneal(const IsingProblem& problem, const AnnealSchedule& schedule,
                            const QmcParams& params, std::uint64_t seed) {
  if (params.n_sweeps < 1) throw InputError("QMC needs n_sweeps >= 1");
  WorldlineSampler sampler(problem, params.trotter, params.beta, params.boundary);
  Rng rng(seed);
  sampler.randomize(rng);
  for (std::size_t i = 1; i <= params.n_sweeps; ++i) {
    const auto p = schedule.eval(static_cast<double>(i) / static_cast<double>(params.n_sweeps));
    sampler.set_field(p.A, p.B);
    sampler.sweep(rng);
  }
  QmcResult out;
  if (params.readout == Readout::slice0) {
    out.config = sampler.state().slice(0);
    out.energy = problem.energy(out.config);
  } else {
    out.energy = std::numeric_limits<double>::infinity();
    for (std::size_t tau = 0; tau < params.trotter; ++tau) {
      auto s = sampler.state().slice(tau);
      const double e = problem.energy(s);
      if (e < out.energy) {
        out.energy = e;
        out.config = std::move(s);
      }
    }
  }
  return out;
}

inline SuccessEstimate qmc_success_probability(const IsingProblem& problem,
                                               const AnnealSchedule& schedule,
                                               const QmcParams& params, std::size_t n_runs,
                                               std::uint64_t seed, double target_energy,
                                               std::size_t workers = 1) {
  if (!problem.is_two_local()) throw UnsupportedProblem("QMC supports 2-local problems only");
  return success_probability(
      n_runs, seed,
      [&](std::uint64_t s) { return qmc_anneal(problem, schedule, params, s).energy <= target_energy + 1e-9; },
      workers);
}

struct PairGridPoint {
  std::size_t n_sweeps = 0;
  double beta = 0.0;
  SuccessEstimate p;
};

struct PairOptimum {
  std::size_t n_sweeps = 0;
  double beta = 0.0;
  double p0 = 0.0;
  bool reached = false;
  std::vector<PairGridPoint> grid;
  /// Per sweep count: smallest beta whose p-hat is within two standard errors
  /// of the best p-hat at that sweep count.
  std::vector<std::pair<std::size_t, double>> saturation_beta;
};

/// Grid search for the (n_sweeps, beta) minimizing beta * n_sweeps subject to
/// p-hat >= target. Ties go to fewer sweeps. Throws TuningFailure if no
/// point reaches the target.
inline PairOptimum optimize_pair_parameters(const IsingProblem& problem,
                                            const AnnealSchedule& schedule, double target,
                                            std::span<const std::size_t> sweeps,
                                            std::span<const double> betas, QmcParams base,
                                            std::size_t n_runs, std::uint64_t seed,
                                            double target_energy, std::size_t workers = 1) {
  if (!(target > 0.0 && target < 1.0)) throw InputError("target p0 must be in (0, 1)");
  if (sweeps.empty() || betas.empty()) throw InputError("empty parameter grid");
  PairOptimum out;
  double best_cost = std::numeric_limits<double>::infinity();
  double max_p = -1.0;
  std::size_t max_index = 0;
  for (auto ns : sweeps) {
    double row_best = -1.0, row_err = 0.0;
    const std::size_t row_start = out.grid.size();
    for (auto b : betas) {
      QmcParams q = base;
      q.n_sweeps = ns;
      q.beta = b;
      auto est = qmc_success_probability(problem, schedule, q, n_runs,
                                         derive_seed(seed, {ns, static_cast<std::uint64_t>(b * 1e6)}),
                                         target_energy, workers);
      out.grid.push_back({ns, b, est});
      if (est.p > max_p) {
        max_p = est.p;
        max_index = out.grid.size() - 1;
      }
      if (est.p > row_best) {
        row_best = est.p;
        row_err = est.std_error;
      }
      const double cost = b * static_cast<double>(ns);
      if (est.p >= target && (cost < best_cost || (cost == best_cost && ns < out.n_sweeps))) {
        best_cost = cost;
        out.n_sweeps = ns;
        out.beta = b;
        out.p0 = est.p;
        out.reached = true;
      }
    }
    for (std::size_t g = row_start; g < out.grid.size(); ++g) {
      if (out.grid[g].p.p >= row_best - 2.0 * std::max(row_err, out.grid[g].p.std_error)) {
        out.saturation_beta.push_back({ns, out.grid[g].beta});
        break;
      }
    }
  }
  if (!out.reached) {
    const auto& g = out.grid[max_index];
    throw TuningFailure("no (n_sweeps, beta) grid point reaches p0 >= " + std::to_string(target) +
                            "; best p-hat " + std::to_string(g.p.p) + " at n_sweeps=" +
                            std::to_string(g.n_sweeps) + ", beta=" + std::to_string(g.beta),
                        max_index, g.p.p);
  }
  return out;
}

}  // namespace tunnelbench
