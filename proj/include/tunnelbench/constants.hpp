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

// Model constants for runtime accounting and unit conversion. The values are
// inputs to the effort model, not measurements of this implementation.

namespace tunnelbench::constants {

/// Boltzmann constant over Planck constant, GHz per kelvin.
inline constexpr double kB_over_h_GHz_per_K = 20.8366;

/// Single-core time per SA spin update (1/5 ns).
inline constexpr double sa_spin_update_seconds = 0.2e-9;

/// Single-core time per QMC worldline update, per unit beta, for the
/// D-Wave 2X schedule.
inline constexpr double qmc_worldline_seconds_per_beta_dw2x = 870e-9;

/// Same for the linear schedule (A: 1 -> 0, B: 0 -> 1).
inline constexpr double qmc_worldline_seconds_per_beta_linear = 115e-9;

/// Noise parameters measured at the end of the anneal (s = 1).
inline constexpr double mrt_linewidth_GHz = 0.661;
inline constexpr double mrt_ohmic_coefficient = 0.12;
inline constexpr double device_temperature_mK = 12.0;

/// Annealing time of the hardware runs, seconds.
inline constexpr double hardware_anneal_seconds = 20e-6;

/// Karmarkar-Karp residue scaling exponent, E_KK ~ N^(-alpha log2 N).
inline constexpr double kk_alpha = 0.72;

/// Target success probability for time-to-solution.
inline constexpr double target_success = 0.99;

}  // namespace tunnelbench::constants
