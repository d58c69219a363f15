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
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tunnelbench/error.hpp"

namespace tunnelbench {

using Spin = std::int8_t;
using SpinConfig = std::vector<Spin>;
using VarIndex = std::uint32_t;

/// One K-local term: sorted, distinct variable indices and a coefficient.
/// Length-1 terms are local fields.
struct Term {
  std::vector<VarIndex> vars;
  double coefficient = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse K-local cost function
///
///   H(s) = - sum_terms J_{j1..jk} s_{j1} ... s_{jk},   s_j = +-1.
///
/// Immutable after construction. Duplicate tuples are merged, tuples that
/// merge to an exactly zero coefficient are dropped, and terms are stored in
/// a canonical order (shorter tuples first, then lexicographic).
class IsingProblem {
 public:
  IsingProblem() = default;

  IsingProblem(std::size_t n, std::vector<Term> terms) : n_(n) {
    std::map<std::vector<VarIndex>, double, TupleOrder> merged;
    for (auto& t : terms) {
      if (t.vars.empty()) throw InputError("term with no variables");
      std::sort(t.vars.begin(), t.vars.end());
      if (std::adjacent_find(t.vars.begin(), t.vars.end()) != t.vars.end())
        throw InputError("term repeats a variable");
      if (t.vars.back() >= n)
        throw InputError("variable index " + std::to_string(t.vars.back()) +
                         " out of range for n=" + std::to_string(n));
      merged[std::move(t.vars)] += t.coefficient;
    }
    terms_.reserve(merged.size());
    for (auto& [vars, c] : merged) {
      if (c == 0.0) continue;
      max_order_ = std::max(max_order_, vars.size());
      terms_.push_back(Term{vars, c});
    }
    build_incidence();
  }

  std::size_t size() const noexcept { return n_; }
  std::span<const Term> terms() const noexcept { return terms_; }

  /// K, the longest tuple length. 1 for a problem without terms.
  std::size_t max_order() const noexcept { return max_order_; }
  bool is_two_local() const noexcept { return max_order_ <= 2; }

  /// Indices into terms() of the terms containing `v`.
  std::span<const std::uint32_t> terms_of(VarIndex v) const noexcept {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }

  /// Coefficient of the 1-tuple {v}; zero when absent.
  double field(VarIndex v) const noexcept {
    for (auto t : terms_of(v))
      if (terms_[t].vars.size() == 1) return terms_[t].coefficient;
    return 0.0;
  }

  double energy(std::span<const Spin> s) const {
    check_length(s.size());
    double e = 0.0;
    for (const auto& t : terms_) {
      int p = 1;
      for (auto v : t.vars) p *= s[v];
      e -= t.coefficient * p;
    }
    return e;
  }

  /// Energy change from flipping s[v]: 2 * sum_{t containing v} J_t prod_t s.
  double flip_delta(std::span<const Spin> s, VarIndex v) const noexcept {
    double d = 0.0;
    for (auto ti : terms_of(v)) {
      const auto& t = terms_[ti];
      int p = 1;
      for (auto u : t.vars) p *= s[u];
      d += t.coefficient * p;
    }
    return 2.0 * d;
  }

  void check_length(std::size_t len) const {
    if (len != n_)
      throw InputError("configuration length " + std::to_string(len) +
                       " does not match problem size " + std::to_string(n_));
  }

  friend bool operator==(const IsingProblem& a, const IsingProblem& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  struct TupleOrder {
    bool operator()(const std::vector<VarIndex>& a, const std::vector<VarIndex>& b) const {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    }
  };

  void build_incidence() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& t : terms_)
      for (auto v : t.vars) ++offsets_[v + 1];
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    incidence_.resize(offsets_[n_]);
    auto fill = offsets_;
    for (std::uint32_t ti = 0; ti < terms_.size(); ++ti)
      for (auto v : terms_[ti].vars) incidence_[fill[v]++] = ti;
  }

  std::size_t n_ = 0;
  std::vector<Term> terms_;
  std::size_t max_order_ = 1;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> incidence_;
};

/// -sum J prod s. Throws InputError on a length mismatch.
inline double evaluate_energy(const IsingProblem& problem, std::span<const Spin> config) {
  return problem.energy(config);
}

/// Compressed adjacency of a 2-local problem: fields plus symmetric
/// neighbor lists. Energy is -sum h_j s_j - sum_{j<k} J_jk s_j s_k.
struct CouplingGraph {
  std::vector<double> field;
  std::vector<std::uint32_t> offsets;
  std::vector<VarIndex> neighbor;
  std::vector<double> coupling;

  static CouplingGraph from(const IsingProblem& problem) {
    if (!problem.is_two_local())
      throw UnsupportedProblem("problem has " + std::to_string(problem.max_order()) +
                               "-local terms; only 2-local problems are supported");
    const auto n = problem.size();
    CouplingGraph g;
    g.field.assign(n, 0.0);
    g.offsets.assign(n + 1, 0);
    for (const auto& t : problem.terms()) {
      if (t.vars.size() == 1) {
        g.field[t.vars[0]] += t.coefficient;
      } else {
        ++g.offsets[t.vars[0] + 1];
        ++g.offsets[t.vars[1] + 1];
      }
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
    g.neighbor.resize(g.offsets[n]);
    g.coupling.resize(g.offsets[n]);
    auto fill = g.offsets;
    for (const auto& t : problem.terms()) {
      if (t.vars.size() != 2) continue;
      auto a = t.vars[0], b = t.vars[1];
      g.neighbor[fill[a]] = b;
      g.coupling[fill[a]++] = t.coefficient;
      g.neighbor[fill[b]] = a;
      g.coupling[fill[b]++] = t.coefficient;
    }
    return g;
  }

  std::size_t size() const noexcept { return field.size(); }

  /// h_j + sum_k J_jk s_k
  double local_field(std::span<const Spin> s, VarIndex j) const noexcept {
    double f = field[j];
    for (auto e = offsets[j]; e < offsets[j + 1]; ++e) f += coupling[e] * s[neighbor[e]];
    return f;
  }
};

}  // namespace tunnelbench
