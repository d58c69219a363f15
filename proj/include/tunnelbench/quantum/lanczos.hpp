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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/random.hpp"

namespace tunnelbench::quantum {

struct EigenOptions {
  double tol = 1e-10;            // relative residual ||Av - theta v|| / max(1, |theta|)
  std::size_t basis = 0;         // Krylov basis size; 0 picks max(2k + 20, 40)
  std::size_t max_restarts = 2000;
  std::size_t dense_below = 256;  // use dense diagonalization for small dimension
  std::uint64_t seed = 12345;
};

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // dim x k, orthonormal columns
  std::size_t matvecs = 0;
};

using RealOperator = std::function<void(const double*, double*)>;

inline EigenPairs dense_lowest(std::size_t dim, const RealOperator& apply, std::size_t k) {
  Eigen::MatrixXd H(dim, dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    e[static_cast<Eigen::Index>(i)] = 1.0;
    apply(e.data(), H.col(static_cast<Eigen::Index>(i)).data());
    e[static_cast<Eigen::Index>(i)] = 0.0;
  }
  H = 0.5 * (H + H.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  const auto kk = static_cast<Eigen::Index>(std::min(k, dim));
  return {es.eigenvalues().head(kk), es.eigenvectors().leftCols(kk), dim};
}

namespace detail {

// Thick-restart Lanczos with full reorthogonalization for the k lowest
// eigenpairs of `apply` restricted to the orthogonal complement of `locked`.
inline EigenPairs thick_restart_lanczos(std::size_t dim, const RealOperator& apply, std::size_t k,
                                        const Eigen::MatrixXd& locked, const EigenOptions& opt,
                                        std::uint64_t seed) {
  using Eigen::Index;
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const auto free_dim = dim - static_cast<std::size_t>(locked.cols());
  const std::size_t m = std::min<std::size_t>(opt.basis ? opt.basis : std::max<std::size_t>(2 * k + 20, 40),
                                              free_dim);
  MatrixXd V(static_cast<Index>(dim), static_cast<Index>(m + 1));
  MatrixXd T = MatrixXd::Zero(static_cast<Index>(m), static_cast<Index>(m));
  auto project_out = [&](Eigen::Ref<VectorXd> w, Index upto) {
    for (int pass = 0; pass < 2; ++pass) {
      if (locked.cols() > 0) w -= locked * (locked.transpose() * w);
      if (upto > 0) w -= V.leftCols(upto) * (V.leftCols(upto).transpose() * w);
    }
  };
  Rng rng(seed);
  auto random_start = [&](Index col) {
    for (Index i = 0; i < V.rows(); ++i) V(i, col) = uniform01(rng) - 0.5;
    project_out(V.col(col), col);
    const double nv = V.col(col).norm();
    if (nv == 0.0) throw NumericalError("Lanczos start vector vanished");
    V.col(col) /= nv;
  };
  random_start(0);
  EigenPairs out;
  VectorXd w(static_cast<Index>(dim));
  Index start = 0;
  double beta_m = 0.0;
  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
    Index used = static_cast<Index>(m);
    for (Index j = start; j < static_cast<Index>(m); ++j) {
      apply(V.col(j).data(), w.data());
      ++out.matvecs;
      if (locked.cols() > 0) w -= locked * (locked.transpose() * w);
      VectorXd h = V.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * h;
      VectorXd h2 = V.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * h2;
      h += h2;
      for (Index i = 0; i <= j; ++i) T(i, j) = T(j, i) = h[i];
      beta_m = w.norm();
      if (beta_m <= 1e-13 * std::max(1.0, std::abs(T(j, j)))) {
        // Invariant subspace: continue with a fresh orthogonal direction.
        if (static_cast<std::size_t>(j + 1) >= free_dim) {
          used = j + 1;
          beta_m = 0.0;
          break;
        }
        random_start(j + 1);
        beta_m = 0.0;
        continue;
      }
      V.col(j + 1) = w / beta_m;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T.topLeftCorner(used, used));
    if (es.info() != Eigen::Success) throw NumericalError("Lanczos projected eigenproblem failed");
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& Y = es.eigenvectors();
    const auto want = static_cast<Index>(std::min<std::size_t>(k, static_cast<std::size_t>(used)));
    bool converged = true;
    for (Index i = 0; i < want; ++i)
      if (std::abs(beta_m * Y(used - 1, i)) > opt.tol * std::max(1.0, std::abs(theta[i])))
        converged = false;
    if (converged || used < static_cast<Index>(m) || restart == opt.max_restarts) {
      if (!converged)
        throw NumericalError("Lanczos did not converge after " + std::to_string(opt.max_restarts) +
                             " restarts (basis " + std::to_string(m) + ")");
      out.values = theta.head(want);
      out.vectors = V.leftCols(used) * Y.leftCols(want);
      return out;
    }
    // Thick restart: keep the lowest p Ritz vectors plus the residual direction.
    const Index p = std::min<Index>(static_cast<Index>(m) - 2, want + (static_cast<Index>(m) - want) / 2);
    MatrixXd kept = V.leftCols(used) * Y.leftCols(p);
    VectorXd resid = V.col(used);
    V.leftCols(p) = kept;
    V.col(p) = resid;
    T.setZero();
    for (Index i = 0; i < p; ++i) T(i, i) = theta[i];
    start = p;
  }
  throw NumericalError("Lanczos iteration limit reached");
}

}  // namespace detail

/// k lowest eigenpairs of a real symmetric operator. Multiplicities are
/// recovered by deflation: after convergence the search is repeated in the
/// complement of the converged vectors until no lower eigenvalue turns up.
inline EigenPairs lowest_eigenpairs(std::size_t dim, const RealOperator& apply, std::size_t k,
                                    const EigenOptions& opt = {}) {
  if (k == 0 || dim == 0) throw InputError("lowest_eigenpairs needs k >= 1 and dim >= 1");
  k = std::min(k, dim);
  if (dim <= opt.dense_below) return dense_lowest(dim, apply, k);
  Eigen::MatrixXd locked(static_cast<Eigen::Index>(dim), 0);
  auto res = detail::thick_restart_lanczos(dim, apply, k, locked, opt, opt.seed);
  std::size_t matvecs = res.matvecs;
  for (std::uint64_t round = 1; round < 64; ++round) {
    if (static_cast<std::size_t>(res.vectors.cols()) >= dim) break;
    auto extra = detail::thick_restart_lanczos(dim, apply, k, res.vectors, opt, derive_seed(opt.seed, round));
    matvecs += extra.matvecs;
    const double top = res.values[res.values.size() - 1];
    const double slack = 1e3 * opt.tol * std::max(1.0, std::abs(top));
    if (extra.values.size() == 0 || extra.values[0] >= top - slack) break;
    // Merge and keep the k lowest.
    const auto a = res.values.size(), b = extra.values.size();
    std::vector<std::pair<double, Eigen::Index>> all;
    for (Eigen::Index i = 0; i < a; ++i) all.push_back({res.values[i], i});
    for (Eigen::Index i = 0; i < b; ++i) all.push_back({extra.values[i], a + i});
    std::sort(all.begin(), all.end());
    const auto keep = static_cast<Eigen::Index>(std::min(k, all.size()));
    Eigen::VectorXd vals(keep);
    Eigen::MatrixXd vecs(static_cast<Eigen::Index>(dim), keep);
    for (Eigen::Index i = 0; i < keep; ++i) {
      vals[i] = all[static_cast<std::size_t>(i)].first;
      const auto src = all[static_cast<std::size_t>(i)].second;
      vecs.col(i) = src < a ? res.vectors.col(src) : extra.vectors.col(src - a);
    }
    res.values = vals;
    res.vectors = vecs;
  }
  res.matvecs = matvecs;
  return res;
}

}  // namespace tunnelbench::quantum
