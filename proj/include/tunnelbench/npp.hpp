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
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "tunnelbench/constants.hpp"
#include "tunnelbench/error.hpp"
#include "tunnelbench/instance_io.hpp"
#include "tunnelbench/ising.hpp"
#include "tunnelbench/random.hpp"
#include "tunnelbench/sa.hpp"
#include "tunnelbench/stats.hpp"

namespace tunnelbench::npp {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr const char* npp_format = "npp-1";

/// N positive integers a_j < 2^b.
struct NppInstance {
  std::vector<BigInt> a;
  unsigned b = 0;
  std::optional<std::uint64_t> seed;

  std::size_t size() const noexcept { return a.size(); }

  void validate() const {
    if (a.empty()) throw InputError("NPP instance needs at least one number");
    if (b < 1) throw InputError("NPP bit width must be >= 1");
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] < 1) throw InputError("NPP number " + std::to_string(j) + " is not positive");
      if (boost::multiprecision::msb(a[j]) + 1 > b)
        throw InputError("NPP number " + std::to_string(j) + " exceeds " + std::to_string(b) + " bits");
    }
  }

  /// (1/N) sum a_j^2 in the real-valued units a_j / 2^b.
  double mean_square_real() const {
    double s = 0.0;
    for (const auto& x : a) {
      const double r = std::ldexp(x.convert_to<double>(), -static_cast<int>(b));
      s += r * r;
    }
    return s / static_cast<double>(a.size());
  }
};

inline NppInstance make_instance(const std::vector<std::int64_t>& values, unsigned b = 0) {
  NppInstance inst;
  for (auto v : values) inst.a.emplace_back(v);
  if (b == 0)
    for (const auto& x : inst.a)
      if (x > 0) b = std::max<unsigned>(b, static_cast<unsigned>(boost::multiprecision::msb(x)) + 1);
  inst.b = std::max(b, 1u);
  inst.validate();
  return inst;
}

/// Hard-regime threshold kappa_c = 1 - log2(N) / (2N).
inline double kappa_c(std::size_t N) {
  return 1.0 - std::log2(static_cast<double>(N)) / (2.0 * static_cast<double>(N));
}

inline bool hard_regime(const NppInstance& inst) {
  return static_cast<double>(inst.b) / static_cast<double>(inst.size()) >= kappa_c(inst.size());
}

/// a_j uniform on [1, 2^b).
inline NppInstance generate_npp(std::size_t N, unsigned b, std::uint64_t seed) {
  if (N < 2) throw InputError("NPP generation needs N >= 2");
  if (b < 1) throw InputError("NPP generation needs b >= 1");
  Rng rng(seed);
  NppInstance inst;
  inst.b = b;
  inst.seed = seed;
  inst.a.reserve(N);
  const unsigned words = (b + 63) / 64;
  for (std::size_t j = 0; j < N; ++j) {
    BigInt x;
    do {
      x = 0;
      for (unsigned w = 0; w < words; ++w) {
        x <<= 64;
        x += rng();
      }
      x &= (BigInt(1) << b) - 1;
    } while (x == 0);
    inst.a.push_back(std::move(x));
  }
  return inst;
}

inline std::vector<NppInstance> generate_ensemble(std::size_t N, unsigned b, std::size_t count,
                                                  std::uint64_t seed) {
  std::vector<NppInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_npp(N, b, derive_seed(seed, i)));
  return out;
}

struct Partition {
  SpinConfig config;
  BigInt omega;  // sum a_j s_j
  BigInt E;      // |omega|

  /// E in the real-valued units a_j / 2^b.
  double E_real(unsigned b) const { return std::ldexp(E.convert_to<double>(), -static_cast<int>(b)); }
};

inline Partition residue(const NppInstance& inst, const SpinConfig& s) {
  if (s.size() != inst.size())
    throw InputError("configuration has " + std::to_string(s.size()) + " spins, instance has " +
                     std::to_string(inst.size()));
  Partition p{s, 0, 0};
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == 1) p.omega += inst.a[j];
    else if (s[j] == -1) p.omega -= inst.a[j];
    else throw InputError("spin values must be +1 or -1");
  }
  p.E = boost::multiprecision::abs(p.omega);
  return p;
}

/// Largest first; each number goes to the lighter set, ties to the first
/// set (s = +1).
inline Partition greedy_partition(const NppInstance& inst) {
  inst.validate();
  std::vector<std::size_t> order(inst.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return inst.a[x] > inst.a[y]; });
  BigInt first = 0, second = 0;
  SpinConfig s(inst.size(), 1);
  for (auto j : order) {
    if (first <= second) {
      first += inst.a[j];
      s[j] = 1;
    } else {
      second += inst.a[j];
      s[j] = -1;
    }
  }
  return residue(inst, s);
}

/// Karmarkar-Karp differencing. The two largest numbers are replaced by
/// their difference; the recorded pairs form a tree whose two-colouring is
/// the partition. Ties in the heap go to the smaller index.
inline Partition kk_partition(const NppInstance& inst) {
  inst.validate();
  const std::size_t n = inst.size();
  using Item = std::pair<BigInt, std::size_t>;
  auto cmp = [](const Item& x, const Item& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second > y.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  for (std::size_t j = 0; j < n; ++j) heap.push({inst.a[j], j});
  std::vector<std::vector<std::size_t>> adj(n);
  while (heap.size() > 1) {
    auto x = heap.top();
    heap.pop();
    auto y = heap.top();
    heap.pop();
    adj[x.second].push_back(y.second);
    adj[y.second].push_back(x.second);
    heap.push({x.first - y.first, x.second});
  }
  const BigInt final_value = heap.top().first;
  SpinConfig s(n, 0);
  std::vector<std::size_t> stack{heap.top().second};
  s[stack.back()] = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v])
      if (s[w] == 0) {
        s[w] = static_cast<Spin>(-s[v]);
        stack.push_back(w);
      }
  }
  auto p = residue(inst, s);
  if (p.E != final_value) throw NumericalError("KK tree colouring does not reproduce the differencing residue");
  return p;
}

namespace detail {

/// Whether sums of +-a_j fit comfortably in int64.
inline bool fits_int64(const NppInstance& inst) {
  unsigned bits = 1;
  while ((std::size_t{1} << bits) < inst.size() + 1) ++bits;
  return inst.b + bits + 2 <= 62;
}

template <class Int>
std::vector<Int> values_as(const NppInstance& inst) {
  std::vector<Int> v;
  v.reserve(inst.size());
  for (const auto& x : inst.a) v.push_back(static_cast<Int>(x));
  return v;
}

template <class Int>
Int abs_of(const Int& x) {
  return x < 0 ? Int(-x) : x;
}

template <class Int>
SpinConfig meet_in_the_middle(const std::vector<Int>& a) {
  const std::size_t n = a.size();
  SpinConfig s(n, 1);
  if (n == 1) return s;
  // s_0 = +1 fixed by the global flip symmetry.
  const std::size_t nl = (n - 1) / 2, nr = n - 1 - nl;
  const std::size_t L0 = 1, R0 = 1 + nl;
  std::vector<std::pair<Int, std::uint32_t>> left(std::size_t{1} << nl);
  for (std::uint32_t m = 0; m < left.size(); ++m) {
    Int sum = 0;
    for (std::size_t k = 0; k < nl; ++k) sum += (m >> k & 1) ? a[L0 + k] : Int(-a[L0 + k]);
    left[m] = {sum, m};
  }
  std::sort(left.begin(), left.end());
  bool have = false;
  Int best = 0;
  std::uint32_t best_l = 0, best_r = 0;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << nr); ++m) {
    Int base = a[0];
    for (std::size_t k = 0; k < nr; ++k) base += (m >> k & 1) ? a[R0 + k] : Int(-a[R0 + k]);
    const Int want = -base;
    auto it = std::lower_bound(left.begin(), left.end(), std::pair<Int, std::uint32_t>{want, 0});
    for (auto cand : {it, it == left.begin() ? left.end() : std::prev(it)}) {
      if (cand == left.end()) continue;
      const Int e = abs_of(Int(base + cand->first));
      if (!have || e < best) {
        have = true;
        best = e;
        best_l = cand->second;
        best_r = m;
      }
    }
    if (have && best == 0) break;
  }
  for (std::size_t k = 0; k < nl; ++k) s[L0 + k] = (best_l >> k & 1) ? 1 : -1;
  for (std::size_t k = 0; k < nr; ++k) s[R0 + k] = (best_r >> k & 1) ? 1 : -1;
  return s;
}

}  // namespace detail

inline constexpr std::size_t npp_brute_force_max = 30;

/// Exact minimum residue by meet-in-the-middle (s_0 = +1).
inline Partition npp_brute_force(const NppInstance& inst) {
  inst.validate();
  if (inst.size() > npp_brute_force_max)
    throw InputError("NPP brute force refused: N=" + std::to_string(inst.size()) + " > " +
                     std::to_string(npp_brute_force_max));
  const auto s = detail::fits_int64(inst) ? detail::meet_in_the_middle(detail::values_as<std::int64_t>(inst))
                                          : detail::meet_in_the_middle(detail::values_as<BigInt>(inst));
  return residue(inst, s);
}

struct AtOptions {
  std::size_t kappa = 2;
  bool at_most = false;        // flip groups of 1..kappa bits instead of exactly kappa
  std::size_t max_steps = 0;   // 0: ceil(50 N / kappa)
  std::size_t max_kappa = 6;   // enumeration guard
};

struct AtResult {
  Partition partition;
  std::size_t steps = 0;
  bool local_minimum = false;
  std::vector<BigInt> trace;  // E after each accepted step, starting with the initial E
};

namespace detail {

template <class Int>
AtResult algorithmic_tunneling_impl(const NppInstance& inst, const std::vector<Int>& a, SpinConfig s,
                                    const AtOptions& opt, std::size_t max_steps) {
  const std::size_t n = a.size();
  Int omega = 0;
  for (std::size_t j = 0; j < n; ++j) omega += s[j] > 0 ? a[j] : Int(-a[j]);
  AtResult res;
  res.trace.emplace_back(BigInt(abs_of(omega)));
  std::vector<std::size_t> pick, best_pick;
  // Group g changes omega by -2 sum_{j in g} s_j a_j.
  auto search = [&](auto&& self, std::size_t from, std::size_t left, const Int& d, Int& best) -> void {
    if (left == 0 || (opt.at_most && !pick.empty())) {
      const Int e = abs_of(Int(omega - d));
      if (e < best) {
        best = e;
        best_pick = pick;
      }
      if (left == 0) return;
    }
    const std::size_t end = opt.at_most ? n : n + 1 - left;
    for (std::size_t j = from; j < end; ++j) {
      pick.push_back(j);
      self(self, j + 1, left - 1, Int(d + (s[j] > 0 ? Int(2 * a[j]) : Int(-2 * a[j]))), best);
      pick.pop_back();
    }
  };
  while (res.steps < max_steps) {
    Int best = abs_of(omega);
    best_pick.clear();
    search(search, 0, opt.kappa, Int(0), best);
    if (best_pick.empty()) {
      res.local_minimum = true;
      break;
    }
    for (auto j : best_pick) {
      omega -= s[j] > 0 ? Int(2 * a[j]) : Int(-2 * a[j]);
      s[j] = static_cast<Spin>(-s[j]);
    }
    ++res.steps;
    res.trace.emplace_back(BigInt(abs_of(omega)));
  }
  res.partition = residue(inst, s);
  return res;
}

}  // namespace detail

/// Number of groups examined per AT step.
inline double at_groups_per_step(std::size_t N, std::size_t kappa, bool at_most) {
  double total = 0.0;
  for (std::size_t k = at_most ? 1 : kappa; k <= kappa; ++k)
    total += boost::math::binomial_coefficient<double>(static_cast<unsigned>(N), static_cast<unsigned>(k));
  return total;
}

/// kappa-opt descent from a uniformly random start: each step applies the
/// best strictly improving flip of a group of kappa bits.
inline AtResult algorithmic_tunneling(const NppInstance& inst, std::uint64_t seed, const AtOptions& opt = {},
                                      const SpinConfig* start = nullptr) {
  inst.validate();
  const std::size_t n = inst.size();
  if (opt.kappa < 1 || opt.kappa > n) throw InputError("AT needs 1 <= kappa <= N");
  const std::size_t max_steps =
      opt.max_steps ? opt.max_steps : static_cast<std::size_t>(std::ceil(50.0 * double(n) / double(opt.kappa)));
  if (opt.kappa > opt.max_kappa) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", at_groups_per_step(n, opt.kappa, opt.at_most) * double(max_steps));
    throw InputError("AT refused: kappa=" + std::to_string(opt.kappa) + " exceeds the guard " +
                     std::to_string(opt.max_kappa) + " (up to " + buf + " group evaluations)");
  }
  SpinConfig s(n);
  if (start) {
    if (start->size() != n) throw InputError("AT start configuration has the wrong length");
    s = *start;
  } else {
    Rng rng(seed);
    for (auto& v : s) v = random_spin(rng);
  }
  if (detail::fits_int64(inst))
    return detail::algorithmic_tunneling_impl(inst, detail::values_as<std::int64_t>(inst), s, opt, max_steps);
  return detail::algorithmic_tunneling_impl(inst, detail::values_as<BigInt>(inst), s, opt, max_steps);
}

/// Closed-form ensemble statistics (real-valued units). Logarithms in the
/// KK scaling are base 2.
struct NppPrediction {
  std::size_t N = 0;
  double mean_square = 0.0;   // <a^2>
  std::size_t kappa = 0;
  double alpha = constants::kk_alpha;
  double mean_E = 0.0;        // sqrt(2 <a^2> N / pi)
  double E_min_median = 0.0;  // <E> 2^-N
  double q = 0.0;             // 1 - 2 kappa / N
  double sigma_q = 0.0;       // <a^2> sqrt(1 - q^2), verbatim
  double P_kappa_00 = 0.0;    // 1 / sqrt(8 pi kappa <a^2>)
  double E_kappa = 0.0;       // [C(N, kappa) P_kappa(0|0)]^-1
  double E_AT = 0.0;          // 4 pi kappa <a^2> (kappa/N)^kappa e^-kappa
  double E_KK_scale = 0.0;    // N^(-alpha log2 N)
  double E_ratio_vs_KK = 0.0; // N^(alpha log2 N - kappa) kappa^kappa e^-kappa
  double N_kappa = 0.0;       // (e / kappa) exp(kappa / alpha)
};

inline NppPrediction predict_stats(std::size_t N, double mean_square, std::size_t kappa,
                                   double alpha = constants::kk_alpha) {
  if (N < 1 || !(mean_square > 0.0) || kappa < 1 || !(alpha > 0.0))
    throw InputError("predict_stats needs N, <a^2>, kappa, alpha > 0");
  const double n = static_cast<double>(N), k = static_cast<double>(kappa), pi = std::numbers::pi;
  NppPrediction p;
  p.N = N;
  p.mean_square = mean_square;
  p.kappa = kappa;
  p.alpha = alpha;
  p.mean_E = std::sqrt(2.0 * mean_square * n / pi);
  p.E_min_median = p.mean_E * std::exp2(-n);
  p.q = 1.0 - 2.0 * k / n;
  p.sigma_q = mean_square * std::sqrt(std::max(0.0, 1.0 - p.q * p.q));
  p.P_kappa_00 = 1.0 / std::sqrt(8.0 * pi * k * mean_square);
  if (kappa <= N)
    p.E_kappa = 1.0 / (boost::math::binomial_coefficient<double>(static_cast<unsigned>(N),
                                                                  static_cast<unsigned>(kappa)) *
                       p.P_kappa_00);
  p.E_AT = 4.0 * pi * k * mean_square * std::pow(k / n, k) * std::exp(-k);
  const double l2 = std::log2(n);
  p.E_KK_scale = std::pow(n, -alpha * l2);
  p.E_ratio_vs_KK = std::pow(n, alpha * l2 - k) * std::pow(k, k) * std::exp(-k);
  p.N_kappa = std::numbers::e / k * std::exp(k / alpha);
  return p;
}

/// Lattice density of signed residues, 2 / sqrt(2 pi N <a^2>) exp(-W^2 / (2 N <a^2>)):
/// residues share the parity of sum a_j, hence the factor 2.
inline double residue_density(double omega, std::size_t N, double mean_square) {
  const double v = static_cast<double>(N) * mean_square;
  return 2.0 / std::sqrt(2.0 * std::numbers::pi * v) * std::exp(-omega * omega / (2.0 * v));
}

/// Gaussian form of P_kappa(W' | W) with the width N sigma(q)^2, verbatim.
inline double conditional_density(double omega_new, double omega, std::size_t N, double mean_square,
                                  std::size_t kappa) {
  const auto p = predict_stats(N, mean_square, kappa);
  const double v = static_cast<double>(N) * p.sigma_q * p.sigma_q;
  const double d = omega_new - p.q * omega;
  return std::exp(-d * d / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
}

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t samples = 0;
};

/// One-sample KS test of values against the standard normal.
inline KsResult ks_standard_normal(std::vector<double> z) {
  if (z.empty()) throw InputError("KS test needs samples");
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = 0.5 * std::erfc(-z[i] / std::numbers::sqrt2);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d), z.size()};
}

/// Residues of random configurations, standardized by sqrt(N <a^2>), against
/// the Gaussian. Real-valued a_j uniform on [0, 1). With fresh_instances each
/// sample draws a new instance; otherwise one instance is sampled repeatedly.
inline KsResult residue_gaussian_ks(std::size_t N, std::size_t samples, std::uint64_t seed,
                                    bool fresh_instances = true) {
  if (N < 1 || samples < 1) throw InputError("residue KS test needs N, samples >= 1");
  Rng rng(seed);
  std::vector<double> a(N), z;
  z.reserve(samples);
  auto draw = [&] {
    for (auto& x : a) x = uniform01(rng);
  };
  draw();
  for (std::size_t i = 0; i < samples; ++i) {
    if (fresh_instances && i > 0) draw();
    double omega = 0.0, sq = 0.0;
    for (double x : a) {
      omega += random_spin(rng) > 0 ? x : -x;
      sq += x * x;
    }
    z.push_back(omega / std::sqrt(sq));
  }
  return ks_standard_normal(std::move(z));
}

/// Metropolis model with E = |omega| / 2^b. Exact int64 residue underneath.
class NppAnnealModel {
 public:
  explicit NppAnnealModel(const NppInstance& inst) : s_(inst.size(), Spin{1}) {
    inst.validate();
    if (!detail::fits_int64(inst)) throw InputError("NPP annealing needs b + log2(N) below 60 bits");
    a_ = detail::values_as<std::int64_t>(inst);
    scale_ = std::ldexp(1.0, -static_cast<int>(inst.b));
    set_state(s_);
  }
  NppAnnealModel(const NppAnnealModel&) = delete;
  NppAnnealModel& operator=(const NppAnnealModel&) = delete;

  std::size_t size() const noexcept { return s_.size(); }
  const SpinConfig& state() const noexcept { return s_; }
  double energy() const noexcept { return static_cast<double>(abs64(omega_)) * scale_; }
  std::int64_t omega() const noexcept { return omega_; }

  void randomize(Rng& rng) {
    for (auto& v : s_) v = random_spin(rng);
    set_state(s_);
  }

  void set_state(const SpinConfig& s) {
    if (s.size() != a_.size()) throw InputError("configuration length mismatch");
    if (&s != &s_) s_ = s;
    omega_ = 0;
    for (std::size_t j = 0; j < a_.size(); ++j) omega_ += s_[j] > 0 ? a_[j] : -a_[j];
  }

  double delta(std::size_t j) const noexcept {
    const std::int64_t next = omega_ - 2 * s_[j] * a_[j];
    return static_cast<double>(abs64(next) - abs64(omega_)) * scale_;
  }

  void flip(std::size_t j) noexcept {
    omega_ -= 2 * s_[j] * a_[j];
    s_[j] = static_cast<Spin>(-s_[j]);
  }

 private:
  static std::int64_t abs64(std::int64_t x) noexcept { return x < 0 ? -x : x; }

  std::vector<std::int64_t> a_;
  SpinConfig s_;
  std::int64_t omega_ = 0;
  double scale_ = 1.0;
};

inline Partition npp_sa_run(const NppInstance& inst, const SaSchedule& schedule, std::uint64_t seed) {
  NppAnnealModel model(inst);
  Rng rng(seed);
  return residue(inst, anneal(model, schedule, rng));
}

/// Fraction of SA runs whose best residue is <= target_E.
inline SuccessEstimate npp_sa_success_probability(const NppInstance& inst, const SaSchedule& schedule,
                                                  std::size_t n_runs, std::uint64_t seed,
                                                  const BigInt& target_E, std::size_t workers = 1) {
  schedule.validate();
  return success_probability(n_runs, seed, [&](std::uint64_t s) {
    return npp_sa_run(inst, schedule, s).E <= target_E;
  }, workers);
}

/// Default NPP tuning grid: geometric beta ramps, sweep counts scaled with
/// 2^N so that a few percent of runs succeed at every size.
inline SaGrid npp_sa_default_grid(std::size_t N) {
  SaGrid g;
  for (int shift : {10, 8}) {
    const int e = static_cast<int>(N) - shift;
    g.sweeps.push_back(e <= 3 ? std::size_t{10} : std::max<std::size_t>(10, std::size_t{1} << e));
  }
  g.betas = {{0.5, 100.0}, {0.5, 1000.0}};
  g.interpolation = BetaInterpolation::geometric;
  return g;
}

/// SA tuning over an NPP ensemble, targets being the exact optima.
inline SaTuneResult npp_sa_tune(const std::vector<NppInstance>& instances, const std::vector<BigInt>& targets,
                                double q, const SaGrid& grid, std::size_t n_runs, std::uint64_t seed,
                                std::size_t workers = 1) {
  if (instances.size() != targets.size()) throw InputError("one target per instance required");
  std::vector<std::size_t> sizes;
  for (const auto& inst : instances) sizes.push_back(inst.size());
  return sa_tune_with(sizes, q, grid, [&](std::size_t i, const SaSchedule& s) {
    return npp_sa_success_probability(instances[i], s, n_runs, derive_seed(seed, i), targets[i], workers).p;
  });
}

inline json to_json(const NppInstance& inst) {
  json j;
  j["format"] = npp_format;
  j["N"] = inst.size();
  j["b"] = inst.b;
  j["a"] = json::array();
  for (const auto& x : inst.a) j["a"].push_back(x.str());
  if (inst.seed) j["seed"] = *inst.seed;
  return j;
}

inline NppInstance npp_instance_from_json(const json& j) {
  try {
    if (j.value("format", std::string{}) != npp_format) throw InputError("not an npp-1 instance");
    NppInstance inst;
    inst.b = j.at("b").get<unsigned>();
    for (const auto& s : j.at("a")) {
      const auto text = s.get<std::string>();
      if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("npp-1 numbers must be decimal strings, got '" + text + "'");
      inst.a.emplace_back(text);
    }
    if (j.at("N").get<std::size_t>() != inst.a.size()) throw InputError("npp-1 N does not match the number list");
    if (j.contains("seed") && !j["seed"].is_null()) inst.seed = j["seed"].get<std::uint64_t>();
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed npp-1 instance: ") + e.what());
  }
}

inline NppInstance read_npp_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return npp_instance_from_json(j);
}

inline void write_npp_instance(const std::string& path, const NppInstance& inst) {
  write_file(path, to_json(inst).dump(1) + "\n");
}

}  // namespace tunnelbench::npp
