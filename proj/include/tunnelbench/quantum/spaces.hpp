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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"

namespace tunnelbench::quantum {

using cplx = std::complex<double>;

inline constexpr std::size_t max_spectrum_spins = 20;
inline constexpr std::size_t max_full_propagation_spins = 16;

/// Basis state bit j set <=> s_j = +1.
inline SpinConfig config_of(std::uint64_t x, std::size_t n) {
  SpinConfig s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (x >> j & 1) ? 1 : -1;
  return s;
}

/// Classical energies of all 2^n basis states, by Gray-code walk.
inline std::vector<double> classical_diagonal(const IsingProblem& problem) {
  const auto n = problem.size();
  if (n > max_spectrum_spins) throw InputError("exact quantum solvers are limited to n <= 20");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<double> diag(dim);
  SpinConfig s(n, Spin{-1});
  double e = problem.energy(s);
  std::uint64_t x = 0;
  diag[0] = e;
  for (std::uint64_t i = 1; i < dim; ++i) {
    const auto j = static_cast<VarIndex>(std::countr_zero(i));
    e += problem.flip_delta(s, j);
    s[j] = static_cast<Spin>(-s[j]);
    x ^= std::uint64_t{1} << j;
    if ((i & 0xffff) == 0) e = problem.energy(s);
    diag[x] = e;
  }
  return diag;
}

/// Full 2^n computational basis; sigma^x applied by bit flips.
class FullSpace {
 public:
  explicit FullSpace(const IsingProblem& problem)
      : n_(problem.size()), diag_(classical_diagonal(problem)) {}

  std::size_t spins() const noexcept { return n_; }
  std::size_t dim() const noexcept { return diag_.size(); }
  const std::vector<double>& diagonal() const noexcept { return diag_; }

  /// out = (sum_j sigma^x_j) in
  template <class T>
  void apply_x(const T* in, T* out) const {
    const std::size_t d = dim();
    for (std::size_t x = 0; x < d; ++x) {
      T acc{};
      for (std::size_t j = 0; j < n_; ++j) acc += in[x ^ (std::size_t{1} << j)];
      out[x] = acc;
    }
  }

  /// Ground state of -sum sigma^x: uniform superposition.
  std::vector<double> driver_ground_state() const {
    return std::vector<double>(dim(), 1.0 / std::sqrt(static_cast<double>(dim())));
  }

 private:
  std::size_t n_;
  std::vector<double> diag_;
};

/// Permutation of variables, as a list of disjoint transpositions.
using Permutation = std::vector<std::pair<VarIndex, VarIndex>>;

/// Variable permutations (single and disjoint double transpositions) that
/// leave the problem invariant. Together they generate a symmetry group of H(s)
/// for every s, since the driver is permutation invariant.
inline std::vector<Permutation> find_symmetry_generators(const IsingProblem& problem) {
  const auto n = problem.size();
  std::map<std::vector<VarIndex>, double> table;
  for (const auto& t : problem.terms()) table[t.vars] = t.coefficient;
  auto invariant = [&](const Permutation& perm) {
    std::vector<VarIndex> image(n);
    std::iota(image.begin(), image.end(), VarIndex{0});
    for (auto [a, b] : perm) std::swap(image[a], image[b]);
    for (const auto& t : problem.terms()) {
      std::vector<VarIndex> v;
      for (auto x : t.vars) v.push_back(image[x]);
      std::sort(v.begin(), v.end());
      auto it = table.find(v);
      if (it == table.end() || it->second != t.coefficient) return false;
    }
    return true;
  };
  std::vector<Permutation> out;
  std::vector<std::pair<VarIndex, VarIndex>> non_symmetric;
  for (VarIndex a = 0; a < n; ++a)
    for (VarIndex b = a + 1; b < n; ++b) {
      if (invariant({{a, b}}))
        out.push_back({{a, b}});
      else
        non_symmetric.push_back({a, b});
    }
  for (std::size_t i = 0; i < non_symmetric.size(); ++i)
    for (std::size_t k = i + 1; k < non_symmetric.size(); ++k) {
      auto [a, b] = non_symmetric[i];
      auto [c, d] = non_symmetric[k];
      if (a == c || a == d || b == c || b == d) continue;
      if (invariant({{a, b}, {c, d}})) out.push_back({{a, b}, {c, d}});
    }
  return out;
}

/// Fully symmetric sector of a permutation group acting on basis states.
/// Basis vectors are normalized orbit sums |o> = |o|^{-1/2} sum_{x in o} |x>;
/// sigma^x has matrix elements <o'|X|o> = n(o->o') sqrt(|o|/|o'|), where
/// n(o->o') counts single flips of one member of o that land in o'.
class SymmetricSector {
 public:
  SymmetricSector(const IsingProblem& problem, const std::vector<Permutation>& generators)
      : n_(problem.size()) {
    if (n_ > max_spectrum_spins) throw InputError("exact quantum solvers are limited to n <= 20");
    const std::uint64_t full = std::uint64_t{1} << n_;
    std::vector<std::uint32_t> parent(full);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::uint64_t x = 0; x < full; ++x) {
      for (const auto& g : generators) {
        std::uint64_t y = x;
        for (auto [a, b] : g) {
          const auto ba = y >> a & 1, bb = y >> b & 1;
          if (ba != bb) y ^= (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
        }
        auto rx = find(static_cast<std::uint32_t>(x)), ry = find(static_cast<std::uint32_t>(y));
        if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
      }
    }
    orbit_of_.resize(full);
    std::vector<std::uint32_t> index_of_root(full, UINT32_MAX);
    for (std::uint64_t x = 0; x < full; ++x) {
      const auto r = find(static_cast<std::uint32_t>(x));
      if (index_of_root[r] == UINT32_MAX) {
        index_of_root[r] = static_cast<std::uint32_t>(rep_.size());
        rep_.push_back(x);  // smallest member, since roots are orbit minima
        size_.push_back(0);
      }
      orbit_of_[x] = index_of_root[r];
      ++size_[orbit_of_[x]];
    }
    const auto full_diag = classical_diagonal(problem);
    diag_.resize(rep_.size());
    for (std::size_t o = 0; o < rep_.size(); ++o) diag_[o] = full_diag[rep_[o]];
    // CSR of X in the orbit basis.
    offsets_.assign(rep_.size() + 1, 0);
    for (std::size_t o = 0; o < rep_.size(); ++o) {
      std::map<std::uint32_t, int> counts;
      for (std::size_t j = 0; j < n_; ++j) ++counts[orbit_of_[rep_[o] ^ (std::uint64_t{1} << j)]];
      for (auto [o2, c] : counts) {
        cols_.push_back(o2);
        vals_.push_back(c * std::sqrt(static_cast<double>(size_[o]) / size_[o2]));
      }
      offsets_[o + 1] = cols_.size();
    }
    // Stored row-wise as <o|X|o2> by symmetry: swap to rows indexed by target.
    transpose();
  }

  explicit SymmetricSector(const IsingProblem& problem)
      : SymmetricSector(problem, find_symmetry_generators(problem)) {}

  std::size_t spins() const noexcept { return n_; }
  std::size_t dim() const noexcept { return rep_.size(); }
  const std::vector<double>& diagonal() const noexcept { return diag_; }
  std::uint64_t representative(std::size_t o) const { return rep_[o]; }
  std::size_t orbit_size(std::size_t o) const { return size_[o]; }
  std::size_t orbit_of(std::uint64_t x) const { return orbit_of_[x]; }

  template <class T>
  void apply_x(const T* in, T* out) const {
    for (std::size_t o = 0; o < dim(); ++o) {
      T acc{};
      for (auto e = offsets_[o]; e < offsets_[o + 1]; ++e) acc += vals_[e] * in[cols_[e]];
      out[o] = acc;
    }
  }

  double x_element(std::size_t row, std::size_t col) const {
    for (auto e = offsets_[row]; e < offsets_[row + 1]; ++e)
      if (cols_[e] == col) return vals_[e];
    return 0.0;
  }

  std::vector<double> driver_ground_state() const {
    std::vector<double> v(dim());
    const double total = std::ldexp(1.0, static_cast<int>(n_));
    for (std::size_t o = 0; o < dim(); ++o) v[o] = std::sqrt(size_[o] / total);
    return v;
  }

 private:
  void transpose() {
    const auto d = rep_.size();
    std::vector<std::size_t> off(d + 1, 0);
    for (auto c : cols_) ++off[c + 1];
    for (std::size_t i = 0; i < d; ++i) off[i + 1] += off[i];
    std::vector<std::uint32_t> cols(cols_.size());
    std::vector<double> vals(vals_.size());
    auto fill = off;
    for (std::size_t o = 0; o < d; ++o)
      for (auto e = offsets_[o]; e < offsets_[o + 1]; ++e) {
        const auto pos = fill[cols_[e]]++;
        cols[pos] = static_cast<std::uint32_t>(o);
        vals[pos] = vals_[e];
      }
    offsets_ = std::move(off);
    cols_ = std::move(cols);
    vals_ = std::move(vals);
  }

  std::size_t n_;
  std::vector<std::uint64_t> rep_;
  std::vector<std::size_t> size_;
  std::vector<std::uint32_t> orbit_of_;
  std::vector<double> diag_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

/// out = -A X in + B diag in, the instantaneous H(s) in a given space.
template <class Space, class T>
void apply_hamiltonian(const Space& space, double A, double B, const T* in, T* out) {
  space.apply_x(in, out);
  const auto& d = space.diagonal();
  for (std::size_t i = 0; i < space.dim(); ++i) out[i] = -A * out[i] + B * d[i] * in[i];
}

}  // namespace tunnelbench::quantum
