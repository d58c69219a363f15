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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tunnelbench/brute_force.hpp"
#include "tunnelbench/chimera.hpp"
#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"
#include "tunnelbench/random.hpp"

namespace tunnelbench {

inline constexpr double default_weak_field = 0.44;
inline constexpr double default_strong_field = -1.0;

/// Two ferromagnetic K4,4 cells side by side (a 1x2 Chimera tile). J = 1 on
/// all intra edges and on the four inter edges; every qubit of the left cell
/// carries h1, every qubit of the right cell carries h2.
inline IsingProblem weak_strong_pair(double h1 = default_weak_field,
                                     double h2 = default_strong_field) {
  const ChimeraGraph g(1, 2);
  std::vector<Term> terms;
  for (const auto& e : g.edges()) terms.push_back({{e.a, e.b}, 1.0});
  for (VarIndex q = 0; q < 8; ++q) terms.push_back({{q}, h1});
  for (VarIndex q = 8; q < 16; ++q) terms.push_back({{q}, h2});
  return IsingProblem(16, std::move(terms));
}

/// How cells are grouped into weak-strong dominoes.
///  - columns:  weak cell at even column, strong partner at the odd column to
///              its right. Strong cells only meet vertically.
///  - mirrored: dominoes alternate orientation along a row (weak-strong,
///              strong-weak, ...), so strong cells also meet horizontally
///              between neighbouring dominoes.
/// A trailing odd column is left idle in both patterns.
enum class DominoPattern { columns, mirrored };

inline std::string to_string(DominoPattern p) {
  return p == DominoPattern::columns ? "columns" : "mirrored";
}

inline DominoPattern domino_pattern_from_string(const std::string& s) {
  if (s == "columns") return DominoPattern::columns;
  if (s == "mirrored") return DominoPattern::mirrored;
  throw InputError("unknown domino pattern '" + s + "'");
}

enum class CellRole { idle, weak, strong };

struct NetworkLayout {
  std::vector<CellRole> role;            // per cell
  std::vector<std::size_t> partner;      // per cell; self for idle cells
  /// Adjacent strong-cell pairs with the sign drawn for their couplers.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, int>> strong_links;
  std::size_t num_dominoes = 0;
};

struct NetworkInstance {
  IsingProblem problem;
  NetworkLayout layout;
  SpinConfig reference_optimum;
  double reference_energy = 0.0;
};

inline NetworkLayout domino_layout(const ChimeraGraph& graph, DominoPattern pattern) {
  const auto rows = graph.rows(), cols = graph.cols();
  NetworkLayout lay;
  lay.role.assign(graph.num_cells(), CellRole::idle);
  lay.partner.resize(graph.num_cells());
  for (std::size_t i = 0; i < lay.partner.size(); ++i) lay.partner[i] = i;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t d = 0; 2 * d + 1 < cols; ++d) {
      std::size_t left = r * cols + 2 * d, right = left + 1;
      const bool flip = pattern == DominoPattern::mirrored && (d % 2 == 1);
      const auto weak = flip ? right : left;
      const auto strong = flip ? left : right;
      lay.role[weak] = CellRole::weak;
      lay.role[strong] = CellRole::strong;
      lay.partner[weak] = strong;
      lay.partner[strong] = weak;
      ++lay.num_dominoes;
    }
  }
  return lay;
}

namespace detail {

/// Contract every cell to one super-spin, enumerate exactly, expand, and
/// certify 1-flip local minimality of the expansion on the full problem.
inline std::pair<SpinConfig, double> contracted_reference(const IsingProblem& problem,
                                                          std::size_t cell_size) {
  const auto n = problem.size();
  std::map<std::size_t, VarIndex> cell_index;  // active cells only
  for (const auto& t : problem.terms())
    for (auto v : t.vars) cell_index.emplace(v / cell_size, 0);
  VarIndex next = 0;
  for (auto& [cell, idx] : cell_index) idx = next++;
  if (cell_index.size() > brute_force_max_variables)
    throw InputError("network has " + std::to_string(cell_index.size()) +
                     " active cells; the contracted oracle enumerates at most " +
                     std::to_string(brute_force_max_variables));

  std::vector<Term> contracted;
  for (const auto& t : problem.terms()) {
    std::map<VarIndex, int> power;
    for (auto v : t.vars) power[cell_index.at(v / cell_size)] ^= 1;
    std::vector<VarIndex> vars;
    for (auto [c, odd] : power)
      if (odd) vars.push_back(c);
    if (!vars.empty()) contracted.push_back({std::move(vars), t.coefficient});
  }
  const IsingProblem cells(cell_index.size(), std::move(contracted));
  const auto gs = brute_force_ground_state(cells);

  SpinConfig full(n, Spin{-1});
  for (std::size_t q = 0; q < n; ++q) {
    auto it = cell_index.find(q / cell_size);
    if (it != cell_index.end()) full[q] = gs.config[it->second];
  }
  for (VarIndex q = 0; q < n; ++q) {
    const double d = problem.flip_delta(full, q);
    if (d < -energy_tolerance) throw CertificationError(q, d);
  }
  return {full, problem.energy(full)};
}

}  // namespace detail

/// Weak-strong cluster network on a Chimera graph. Weak cells carry h1 and
/// couple ferromagnetically to their strong partner; strong cells carry h2;
/// each adjacent pair of strong cells gets its couplers set to one random
/// sign. Qubits marked broken in the graph are dropped with their terms.
inline NetworkInstance weak_strong_network(const ChimeraGraph& graph, DominoPattern pattern,
                                           std::uint64_t seed,
                                           double h1 = default_weak_field,
                                           double h2 = default_strong_field) {
  NetworkInstance out;
  out.layout = domino_layout(graph, pattern);
  auto& lay = out.layout;
  if (lay.num_dominoes == 0) throw InputError("graph too small for a weak-strong domino");

  Rng rng(seed);
  std::vector<Term> terms;
  const auto ncell = graph.num_cells();
  std::vector<std::vector<ChimeraGraph::Edge>> by_pair;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ChimeraGraph::Edge>> inter;
  for (const auto& e : graph.edges()) {
    auto ca = graph.cell_of(e.a), cb = graph.cell_of(e.b);
    if (ca == cb) {
      if (lay.role[ca] != CellRole::idle) terms.push_back({{e.a, e.b}, 1.0});
    } else {
      inter[{std::min(ca, cb), std::max(ca, cb)}].push_back(e);
    }
  }
  for (const auto& [cells, edges] : inter) {
    auto [ca, cb] = cells;
    if (lay.role[ca] == CellRole::idle || lay.role[cb] == CellRole::idle) continue;
    if (lay.partner[ca] == cb) {
      for (const auto& e : edges) terms.push_back({{e.a, e.b}, 1.0});
    } else if (lay.role[ca] == CellRole::strong && lay.role[cb] == CellRole::strong) {
      const int sign = random_spin(rng);
      lay.strong_links.push_back({{ca, cb}, sign});
      for (const auto& e : edges) terms.push_back({{e.a, e.b}, static_cast<double>(sign)});
    }
  }
  for (std::size_t c = 0; c < ncell; ++c) {
    if (lay.role[c] == CellRole::idle) continue;
    const double h = lay.role[c] == CellRole::weak ? h1 : h2;
    for (std::size_t k = 0; k < ChimeraGraph::cell_size; ++k) {
      const auto q = static_cast<VarIndex>(c * ChimeraGraph::cell_size + k);
      if (!graph.is_broken(q)) terms.push_back({{q}, h});
    }
  }
  out.problem = IsingProblem(graph.num_qubits(), std::move(terms));
  auto [config, energy] = detail::contracted_reference(out.problem, ChimeraGraph::cell_size);
  out.reference_optimum = std::move(config);
  out.reference_energy = energy;
  return out;
}

enum class Topology { complete, chimera };
enum class CouplingSet { plus_minus_one, gaussian };

struct RandomIsingSpec {
  std::size_t n = 0;
  Topology topology = Topology::complete;
  std::size_t rows = 1, cols = 1;  // chimera only; n must be 8*rows*cols
  CouplingSet couplings = CouplingSet::plus_minus_one;
  bool fields = false;             // draw per-variable fields from the same set
};

/// Random 2-local test instance, a pure function of (spec, seed).
inline IsingProblem random_ising(const RandomIsingSpec& spec, std::uint64_t seed) {
  if (spec.n < 2) throw InputError("random_ising needs n >= 2");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  auto draw = [&]() -> double {
    if (spec.couplings == CouplingSet::plus_minus_one) return random_spin(rng);
    return normal(rng);
  };
  std::vector<Term> terms;
  if (spec.topology == Topology::complete) {
    for (VarIndex i = 0; i < spec.n; ++i)
      for (VarIndex j = i + 1; j < spec.n; ++j) terms.push_back({{i, j}, draw()});
  } else {
    const ChimeraGraph g(spec.rows, spec.cols);
    if (g.num_qubits() != spec.n)
      throw InputError("chimera topology needs n = 8*rows*cols");
    for (const auto& e : g.edges()) terms.push_back({{e.a, e.b}, draw()});
  }
  if (spec.fields)
    for (VarIndex i = 0; i < spec.n; ++i) terms.push_back({{i}, draw()});
  return IsingProblem(spec.n, std::move(terms));
}

}  // namespace tunnelbench
