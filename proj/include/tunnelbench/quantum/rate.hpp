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
#include <functional>
#include <string>
#include <vector>

#include "tunnelbench/constants.hpp"
#include "tunnelbench/error.hpp"

namespace tunnelbench::quantum {

/// k_B T / h in GHz for T in millikelvin.
inline double temperature_to_frequency(double T_mK) {
  if (!(T_mK > 0.0)) throw InputError("temperature must be positive");
  return constants::kB_over_h_GHz_per_K * T_mK * 1e-3;
}

/// Inverse temperature in 1/GHz.
inline double beta_from_temperature(double T_mK) { return 1.0 / temperature_to_frequency(T_mK); }

struct NoiseParameters {
  double W_GHz;  // line width
  double eta;    // ohmic coupling
};

/// Noise parameters along the anneal from their end-of-anneal values:
/// (W(s)/W_MRT)^2 = eta(s)/eta_MRT = B(s)/B(1).
inline NoiseParameters rescale_noise(double B_s, double B_1,
                                     double W_mrt = constants::mrt_linewidth_GHz,
                                     double eta_mrt = constants::mrt_ohmic_coefficient) {
  if (!(B_1 > 0.0) || !(B_s >= 0.0)) throw InputError("noise rescaling needs B(1) > 0, B(s) >= 0");
  const double r = B_s / B_1;
  return {W_mrt * std::sqrt(r), eta_mrt * r};
}

/// Two-level rate model. W10(s) is the relaxation rate into the ground state
/// (1/ns); the excitation rate follows from detailed balance,
/// W01 = W10 exp(-Delta10 / (k_B T / h)).
struct RateModel {
  std::function<double(double)> gap_GHz;       // Delta10(s)
  std::function<double(double)> w10_per_ns;    // W10(s) >= 0
  double temperature_mK = constants::device_temperature_mK;
  double T_QA_ns = 1000.0;

  double w01(double s) const {
    return w10_per_ns(s) * std::exp(-gap_GHz(s) / temperature_to_frequency(temperature_mK));
  }
};

/// Synthetic rate family: constant W0 up to s*, decaying as exp(-c (s - s*)) after.
inline std::function<double(double)> decaying_rate(double W0, double c, double s_star) {
  return [=](double s) { return W0 * std::exp(-c * std::max(0.0, s - s_star)); };
}

struct RateTrace {
  std::vector<double> s, p0;
};

struct RateOptions {
  double tol = 1e-10;
  double ds_initial = 1e-3;
  double ds_min = 1e-14;
  std::size_t max_steps = 10'000'000;
  std::size_t samples = 101;  // output points, uniform in s
};

/// Integrates dp0/dt = -(W01 + W10) p0 + W10 over s = t/T_QA in [0, 1] from
/// p0 = 1. Each step freezes the rates at the step midpoint and applies the
/// exact relaxation toward the instantaneous equilibrium, so p0 stays in
/// [0, 1] for any step size; the step is chosen by step doubling.
inline RateTrace rate_evolve(const RateModel& model, const RateOptions& opt = {}) {
  if (!model.gap_GHz || !model.w10_per_ns) throw InputError("rate model needs gap and rate functions");
  if (!(model.T_QA_ns > 0.0)) throw InputError("T_QA must be positive");
  const double kT = temperature_to_frequency(model.temperature_mK);
  auto relax = [&](double p, double s, double ds) {
    const double sm = s + 0.5 * ds;
    const double w10 = model.w10_per_ns(sm);
    if (!(w10 >= 0.0) || !std::isfinite(w10)) throw InputError("W10 must be finite and >= 0");
    const double w01 = w10 * std::exp(-model.gap_GHz(sm) / kT);
    const double k = (w01 + w10) * model.T_QA_ns;
    if (k == 0.0) return p;
    const double peq = w10 / (w01 + w10);
    return peq + (p - peq) * std::exp(-k * ds);
  };
  RateTrace out;
  const auto n = std::max<std::size_t>(opt.samples, 2);
  double p = 1.0, s = 0.0, ds = opt.ds_initial;
  std::size_t steps = 0;
  out.s.push_back(0.0);
  out.p0.push_back(1.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double target = static_cast<double>(i) / static_cast<double>(n - 1);
    while (s < target) {
      if (++steps > opt.max_steps) throw NumericalError("rate equation step limit reached");
      const double h = std::min(ds, target - s);
      const double big = relax(p, s, h);
      const double half = relax(relax(p, s, h / 2), s + h / 2, h / 2);
      const double err = std::abs(big - half);
      if (err > opt.tol) {
        ds = h * std::max(0.2, 0.9 * std::sqrt(opt.tol / err));
        if (ds < opt.ds_min) throw NumericalError("rate equation step size underflow (stiff failure)");
        continue;
      }
      p = std::clamp(half + (half - big), 0.0, 1.0);  // Richardson, second order
      s = h >= target - s ? target : s + h;
      ds = h * (err > 0 ? std::min(4.0, 0.9 * std::sqrt(opt.tol / err)) : 4.0);
    }
    out.s.push_back(target);
    out.p0.push_back(p);
  }
  return out;
}

}  // namespace tunnelbench::quantum
