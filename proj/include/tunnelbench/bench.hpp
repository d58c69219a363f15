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
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "tunnelbench/constants.hpp"
#include "tunnelbench/error.hpp"
#include "tunnelbench/instance_io.hpp"
#include "tunnelbench/random.hpp"
#include "tunnelbench/stats.hpp"

namespace tunnelbench::bench {

/// Time to reach the target success probability with independent restarts,
/// t_run ln(1 - target) / ln(1 - p). At least one run; infinite at p = 0.
inline double time_to_target(double p, double t_run, double target = constants::target_success) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("success probability must lie in [0, 1]");
  if (!(t_run >= 0.0)) throw InputError("run time must be non-negative");
  if (p == 0.0) return infinity;
  if (p >= target) return t_run;
  return t_run * std::log1p(-target) / std::log1p(-p);
}

inline double sa_effort_seconds(double n_sweeps, double N) {
  return n_sweeps * N * constants::sa_spin_update_seconds;
}

enum class QmcScheduleKind { dw2x, linear };

inline QmcScheduleKind qmc_schedule_kind_from_string(const std::string& s) {
  if (s == "dw2x" || s == "dw2x-approx") return QmcScheduleKind::dw2x;
  if (s == "linear") return QmcScheduleKind::linear;
  throw InputError("unknown schedule kind '" + s + "' (expected dw2x or linear)");
}

inline double worldline_seconds(double beta, QmcScheduleKind kind) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  return beta * (kind == QmcScheduleKind::dw2x ? constants::qmc_worldline_seconds_per_beta_dw2x
                                               : constants::qmc_worldline_seconds_per_beta_linear);
}

inline double qmc_effort_seconds(double n_sweeps, double N, double beta, QmcScheduleKind kind) {
  return n_sweeps * N * worldline_seconds(beta, kind);
}

inline double qmc_effort_seconds(double n_sweeps, double N, double beta, const std::string& kind) {
  return qmc_effort_seconds(n_sweeps, N, beta, qmc_schedule_kind_from_string(kind));
}

/// Nearest-rank quantile with a percentile-bootstrap interval over the
/// values (instances). Infinite values stand for absent data.
struct QuantileEstimate {
  double value = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  bool absent() const noexcept { return !std::isfinite(value); }
};

inline QuantileEstimate quantile_ci(const std::vector<double>& values, double q, std::size_t n_boot = 1000,
                                    std::uint64_t seed = 0, double level = 0.95) {
  if (values.empty()) throw InputError("quantile of an empty set");
  if (!(q > 0.0 && q < 1.0)) throw InputError("quantile must lie in (0, 1)");
  if (n_boot < 1) throw InputError("n_boot must be >= 1");
  QuantileEstimate est;
  est.value = nearest_rank_quantile(values, q);
  Rng rng(seed);
  std::vector<double> boot(n_boot), sample(values.size());
  for (auto& b : boot) {
    for (auto& s : sample) s = values[uniform_index(rng, values.size())];
    b = nearest_rank_quantile(sample, q);
  }
  const double tail = 0.5 * (1.0 - level);
  est.ci_lo = nearest_rank_quantile(boot, std::max(tail, 1e-12));
  est.ci_hi = nearest_rank_quantile(boot, 1.0 - tail);
  return est;
}

/// Ratio of medians median(x)/median(y) with a paired percentile-bootstrap
/// interval (instances resampled jointly).
inline QuantileEstimate median_ratio_ci(const std::vector<double>& x, const std::vector<double>& y,
                                        std::size_t n_boot = 1000, std::uint64_t seed = 0, double level = 0.95) {
  if (x.size() != y.size() || x.empty()) throw InputError("paired samples of equal nonzero length required");
  QuantileEstimate est;
  est.value = median(x) / median(y);
  Rng rng(seed);
  std::vector<double> boot(n_boot), bx(x.size()), by(y.size());
  for (auto& b : boot) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto k = uniform_index(rng, x.size());
      bx[i] = x[k];
      by[i] = y[k];
    }
    b = median(bx) / median(by);
  }
  const double tail = 0.5 * (1.0 - level);
  est.ci_lo = nearest_rank_quantile(boot, tail);
  est.ci_hi = nearest_rank_quantile(boot, 1.0 - tail);
  return est;
}

/// Fit of log2 T = log2(prefactor) + alpha N.
struct FitResult {
  double alpha = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;   // RMS of log2 residuals
  double alpha_stderr = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  std::size_t points = 0;
};

inline FitResult scaling_fit(const std::vector<double>& sizes, const std::vector<double>& times,
                             double level = 0.95) {
  if (sizes.size() != times.size()) throw InputError("sizes and times differ in length");
  if (sizes.size() < 4) throw InputError("scaling fit needs at least 4 points");
  const double n = static_cast<double>(sizes.size());
  double sx = 0, sy = 0;
  std::vector<double> y(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i]))
      throw InputError("scaling fit needs finite positive times");
    y[i] = std::log2(times[i]);
    sx += sizes[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sxx += (sizes[i] - mx) * (sizes[i] - mx);
    sxy += (sizes[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("scaling fit needs at least two distinct sizes");
  FitResult f;
  f.points = sizes.size();
  f.alpha = sxy / sxx;
  const double c = my - f.alpha * mx;
  f.prefactor = std::exp2(c);
  double ss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - (c + f.alpha * sizes[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.alpha_stderr = std::sqrt(ss / (n - 2) / sxx);
  boost::math::students_t t(n - 2);
  const double k = boost::math::quantile(boost::math::complement(t, 0.5 * (1.0 - level)));
  f.ci_lo = f.alpha - k * f.alpha_stderr;
  f.ci_hi = f.alpha + k * f.alpha_stderr;
  return f;
}

/// Relative cost of solving c independent pairs concurrently:
/// n_sweeps beta ceil(ln(1 - target) / ln(1 - p^c)), at least one run.
inline double pair_to_network_estimate(double p, double c, double n_sweeps, double beta,
                                       double target = constants::target_success) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("pair success probability must lie in [0, 1]");
  if (!(c >= 1.0)) throw InputError("pair count must be >= 1");
  const double pc = std::pow(p, c);
  if (!(pc > 0.0)) return infinity;
  const double runs = pc >= 1.0 ? 1.0 : std::max(1.0, std::ceil(std::log1p(-target) / std::log1p(-pc)));
  return n_sweeps * beta * runs;
}

/// n_sweeps >> 1 ns / T_QA, checked as n_sweeps T_QA / 1 ns > margin.
inline bool sweeps_condition_check(double n_sweeps, double T_QA_ns, double margin = 10.0) {
  return n_sweeps * T_QA_ns > margin;
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Digest of a parameter set (canonical JSON: keys sorted by nlohmann).
inline std::string params_digest(const json& params) { return fnv1a_hex(params.dump()); }

/// One solver run.
struct BenchmarkRecord {
  std::string instance_id;
  std::string algorithm;
  std::string params_digest;
  json params = json::object();
  std::uint64_t seed = 0;
  bool success = false;
  std::size_t n_sweeps = 0;
  std::size_t N = 0;
  std::optional<double> beta;
  double energy = 0.0;
  std::optional<double> reference_energy;
  double run_seconds = 0.0;  // modelled single-core time of this run
  json constants = json::object();
  std::optional<std::string> error;

  auto key() const { return std::tie(algorithm, instance_id, params_digest, seed); }
};

inline json to_json(const BenchmarkRecord& r) {
  json j;
  j["instance_id"] = r.instance_id;
  j["algorithm"] = r.algorithm;
  j["params_digest"] = r.params_digest;
  j["params"] = r.params;
  j["seed"] = r.seed;
  j["success"] = r.success;
  j["n_sweeps"] = r.n_sweeps;
  j["N"] = r.N;
  j["beta"] = r.beta ? json(*r.beta) : json(nullptr);
  j["energy"] = r.energy;
  j["reference_energy"] = r.reference_energy ? json(*r.reference_energy) : json(nullptr);
  j["run_seconds"] = r.run_seconds;
  j["constants"] = r.constants;
  if (r.error) j["error"] = *r.error;
  return j;
}

inline BenchmarkRecord record_from_json(const json& j) {
  try {
    BenchmarkRecord r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.params_digest = j.value("params_digest", std::string{});
    r.params = j.value("params", json::object());
    r.seed = j.value("seed", std::uint64_t{0});
    r.success = j.at("success").get<bool>();
    r.n_sweeps = j.value("n_sweeps", std::size_t{0});
    r.N = j.at("N").get<std::size_t>();
    if (j.contains("beta") && !j["beta"].is_null()) r.beta = j["beta"].get<double>();
    // non-finite energies (error records) serialize as null
    if (j.contains("energy")) r.energy = j["energy"].is_null() ? infinity : j["energy"].get<double>();
    if (j.contains("reference_energy") && !j["reference_energy"].is_null())
      r.reference_energy = j["reference_energy"].get<double>();
    r.run_seconds = j.value("run_seconds", 0.0);
    r.constants = j.value("constants", json::object());
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed benchmark record: ") + e.what());
  }
}

inline std::string to_jsonl(std::vector<BenchmarkRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

inline std::vector<BenchmarkRecord> parse_jsonl(const std::string& text) {
  std::vector<BenchmarkRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw InputError("record line " + std::to_string(lineno) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("record line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

struct SummaryRow {
  std::size_t N = 0;
  double quantile = 0.0;
  QuantileEstimate tts;
  std::string algorithm;
  std::string params_digest;  // parameter set chosen for this quantile
};

struct SummaryOptions {
  std::vector<double> quantiles{0.5, 0.75, 0.85};
  std::size_t n_boot = 1000;
  std::uint64_t seed = 0;
  double target = constants::target_success;
};

/// Per (algorithm, N, quantile): TTS per instance from its success fraction
/// and modelled run time, quantile over instances with bootstrap CI, and the
/// parameter set with the smallest quantile (tuning per size and quantile).
/// Error records count as failed runs.
inline std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records,
                                         const SummaryOptions& opt = {}) {
  struct Acc {
    std::size_t runs = 0, ok = 0;
    double run_seconds = 0.0;
  };
  // algorithm -> N -> digest -> instance -> counts
  std::map<std::string, std::map<std::size_t, std::map<std::string, std::map<std::string, Acc>>>> groups;
  for (const auto& r : records) {
    auto& a = groups[r.algorithm][r.N][r.params_digest][r.instance_id];
    ++a.runs;
    if (r.success && !r.error) ++a.ok;
    a.run_seconds = std::max(a.run_seconds, r.run_seconds);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [alg, byN] : groups)
    for (const auto& [N, byDigest] : byN) {
      std::set<std::string> instances;
      for (const auto& [d, byInst] : byDigest)
        for (const auto& [id, acc] : byInst) instances.insert(id);
      for (double q : opt.quantiles) {
        SummaryRow best;
        bool have = false;
        for (const auto& [d, byInst] : byDigest) {
          std::vector<double> tts;
          for (const auto& id : instances) {
            auto it = byInst.find(id);
            if (it == byInst.end()) {
              tts.push_back(infinity);  // instance not covered by this parameter set
              continue;
            }
            const auto& acc = it->second;
            tts.push_back(time_to_target(double(acc.ok) / double(acc.runs), acc.run_seconds, opt.target));
          }
          auto est = quantile_ci(tts, q, opt.n_boot, opt.seed);
          if (!have || est.value < best.tts.value) {
            best = {N, q, est, alg, d};
            have = true;
          }
        }
        rows.push_back(best);
      }
    }
  return rows;
}

inline std::string format_cell(double v) {
  if (!std::isfinite(v)) return "absent";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// CSV "N,quantile,tts_seconds,ci_lo,ci_hi,algorithm"; infinite cells are "absent".
inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "N,quantile,tts_seconds,ci_lo,ci_hi,algorithm\n";
  char q[16];
  for (const auto& r : rows) {
    std::snprintf(q, sizeof q, "%g", r.quantile);
    out += std::to_string(r.N) + "," + q + "," + format_cell(r.tts.value) + "," + format_cell(r.tts.ci_lo) + "," +
           format_cell(r.tts.ci_hi) + "," + r.algorithm + "\n";
  }
  return out;
}

}  // namespace tunnelbench::bench
