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

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"

namespace tunnelbench {

/// Grid of K4,4 unit cells. Qubit index ((r*cols)+c)*8 + k, k in [0,8).
/// Within a cell, k in {0..3} couple to k in {4..7}. Horizontally adjacent
/// cells couple equal k in {4..7}; vertically adjacent cells couple equal k
/// in {0..3}. Edges touching a broken qubit are absent.
class ChimeraGraph {
 public:
  struct Edge {
    VarIndex a;
    VarIndex b;
    bool inter_cell;
  };

  ChimeraGraph(std::size_t rows, std::size_t cols, std::set<VarIndex> broken = {})
      : rows_(rows), cols_(cols), broken_(std::move(broken)) {
    if (rows == 0 || cols == 0) throw InputError("chimera grid needs rows, cols >= 1");
    for (auto q : broken_)
      if (q >= num_qubits())
        throw InputError("broken qubit " + std::to_string(q) + " out of range");
    enumerate_edges();
  }

  static constexpr std::size_t cell_size = 8;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t num_cells() const noexcept { return rows_ * cols_; }
  std::size_t num_qubits() const noexcept { return num_cells() * cell_size; }
  std::size_t num_active_qubits() const noexcept { return num_qubits() - broken_.size(); }
  const std::set<VarIndex>& broken() const noexcept { return broken_; }
  bool is_broken(VarIndex q) const { return broken_.count(q) != 0; }

  VarIndex qubit(std::size_t r, std::size_t c, std::size_t k) const noexcept {
    return static_cast<VarIndex>(((r * cols_) + c) * cell_size + k);
  }
  std::size_t cell_of(VarIndex q) const noexcept { return q / cell_size; }

  /// Deterministic order: cells row-major; per cell its intra edges, then the
  /// edges to the right neighbour, then the edges to the neighbour below.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Edges between two cells (intra edges when a == b), in edges() order.
  std::vector<Edge> edges_between(std::size_t cell_a, std::size_t cell_b) const {
    std::vector<Edge> out;
    for (const auto& e : edges_) {
      auto ca = cell_of(e.a), cb = cell_of(e.b);
      if ((ca == cell_a && cb == cell_b) || (ca == cell_b && cb == cell_a)) out.push_back(e);
    }
    return out;
  }

 private:
  void add(VarIndex a, VarIndex b, bool inter) {
    if (is_broken(a) || is_broken(b)) return;
    edges_.push_back({a, b, inter});
  }

  void enumerate_edges() {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t j = 4; j < 8; ++j) add(qubit(r, c, i), qubit(r, c, j), false);
        if (c + 1 < cols_)
          for (std::size_t k = 4; k < 8; ++k) add(qubit(r, c, k), qubit(r, c + 1, k), true);
        if (r + 1 < rows_)
          for (std::size_t k = 0; k < 4; ++k) add(qubit(r, c, k), qubit(r + 1, c, k), true);
      }
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::set<VarIndex> broken_;
  std::vector<Edge> edges_;
};

inline ChimeraGraph build_chimera(std::size_t rows, std::size_t cols,
                                  std::set<VarIndex> broken = {}) {
  return ChimeraGraph(rows, cols, std::move(broken));
}

}  // namespace tunnelbench
