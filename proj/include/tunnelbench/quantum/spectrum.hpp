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

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "tunnelbench/parallel.hpp"
#include "tunnelbench/quantum/lanczos.hpp"
#include "tunnelbench/quantum/spaces.hpp"
#include "tunnelbench/schedule.hpp"

namespace tunnelbench::quantum {

/// Problem plus schedule; H(s) = -A(s) sum sigma^x + B(s) H_P with H_P the
/// problem's cost with s_j -> sigma^z_j. Energies in GHz.
struct QuantumModel {
  IsingProblem problem;
  AnnealSchedule schedule;
};

/// k lowest eigenpairs of H at fixed (A, B) in the given space.
template <class Space>
EigenPairs instantaneous_eigenpairs(const Space& space, double A, double B, std::size_t k,
                                    const EigenOptions& opt = {}) {
  const auto dim = space.dim();
  if (A == 0.0) {
    // Diagonal: sort basis states by energy.
    const auto& d = space.diagonal();
    std::vector<std::size_t> idx(dim);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const auto kk = std::min(k, dim);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(),
                      [&](auto a, auto b) { return d[a] < d[b] || (d[a] == d[b] && a < b); });
    EigenPairs out;
    out.values.resize(static_cast<Eigen::Index>(kk));
    out.vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(kk));
    for (std::size_t i = 0; i < kk; ++i) {
      out.values[static_cast<Eigen::Index>(i)] = B * d[idx[i]];
      out.vectors(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return out;
  }
  return lowest_eigenpairs(
      dim, [&](const double* in, double* out) { apply_hamiltonian(space, A, B, in, out); }, k, opt);
}

struct SpectrumPoint {
  double s = 0.0;
  std::vector<double> levels;  // ascending, GHz
};

struct Spectrum {
  std::vector<SpectrumPoint> points;
  double gap_min = 0.0;       // min over s of E1 - E0, refined
  double s_at_gap_min = 0.0;
  double second_gap_at_min = 0.0;  // E2 - E0 at s_at_gap_min (if k >= 3)
  std::size_t gap_local_minima = 0;  // interior strict local minima of E1 - E0 on the grid
};

struct SpectrumOptions {
  bool refine = true;
  std::size_t workers = 1;
  EigenOptions eigen;
};

template <class Space>
std::vector<double> levels_at(const Space& space, const AnnealSchedule& schedule, double s,
                              std::size_t k, const EigenOptions& opt) {
  const auto p = schedule.eval(s);
  auto r = instantaneous_eigenpairs(space, p.A, p.B, k, opt);
  return {r.values.data(), r.values.data() + r.values.size()};
}

/// k lowest levels of H(s) on the s grid, with the location and size of the
/// minimum gap E1 - E0 (refined by Brent minimization between the grid
/// neighbours of the grid minimum).
template <class Space>
Spectrum spectrum_vs_s(const Space& space, const AnnealSchedule& schedule, std::size_t k,
                       const std::vector<double>& s_grid, const SpectrumOptions& opt = {}) {
  if (k < 1) throw InputError("spectrum_vs_s needs k >= 1");
  if (s_grid.empty()) throw InputError("empty s grid");
  Spectrum out;
  out.points.resize(s_grid.size());
  parallel_for(s_grid.size(), opt.workers, [&](std::size_t i) {
    out.points[i] = {s_grid[i], levels_at(space, schedule, s_grid[i], k, opt.eigen)};
  });
  if (k < 2 || space.dim() < 2) return out;
  std::vector<double> gap;
  for (const auto& p : out.points) gap.push_back(p.levels[1] - p.levels[0]);
  for (std::size_t i = 1; i + 1 < gap.size(); ++i)
    if (gap[i] < gap[i - 1] && gap[i] < gap[i + 1]) ++out.gap_local_minima;
  const auto im = static_cast<std::size_t>(std::min_element(gap.begin(), gap.end()) - gap.begin());
  out.gap_min = gap[im];
  out.s_at_gap_min = s_grid[im];
  if (opt.refine && im > 0 && im + 1 < gap.size()) {
    auto f = [&](double s) {
      auto l = levels_at(space, schedule, s, 2, opt.eigen);
      return l[1] - l[0];
    };
    auto [s_star, g_star] =
        boost::math::tools::brent_find_minima(f, s_grid[im - 1], s_grid[im + 1], 40);
    if (g_star < out.gap_min) {
      out.gap_min = g_star;
      out.s_at_gap_min = s_star;
    }
  }
  if (k >= 3) {
    auto l = levels_at(space, schedule, out.s_at_gap_min, 3, opt.eigen);
    out.second_gap_at_min = l[2] - l[0];
  }
  return out;
}

inline std::vector<double> uniform_grid(double a, double b, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = points == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

/// "s,E0,E1,...,Ek" rows.
inline std::string spectrum_to_csv(const Spectrum& sp) {
  std::ostringstream out;
  const std::size_t k = sp.points.empty() ? 0 : sp.points.front().levels.size();
  out << "s";
  for (std::size_t i = 0; i < k; ++i) out << ",E" << i;
  out << "\n";
  char buf[64];
  for (const auto& p : sp.points) {
    std::snprintf(buf, sizeof buf, "%.6f", p.s);
    out << buf;
    for (double e : p.levels) {
      std::snprintf(buf, sizeof buf, ",%.10g", e);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace tunnelbench::quantum
