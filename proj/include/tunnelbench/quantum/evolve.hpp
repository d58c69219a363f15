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
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/quantum/spectrum.hpp"

namespace tunnelbench::quantum {

struct EvolveOptions {
  double tol = 1e-8;            // local error per step (2-norm of the state)
  std::size_t krylov_max = 48;
  double dt_initial = 1e-3;     // ns
  double dt_min = 1e-12;        // ns
  std::size_t max_steps = 50'000'000;
};

namespace detail {

/// psi <- exp(-i tau (cx X + cz D)) psi by Lanczos (three-term recurrence) in
/// the Krylov space of psi.
/// Returns false if the a-posteriori error estimate stays above tol.
template <class Space>
bool krylov_expv(const Space& space, double cx, double cz, double tau, Eigen::VectorXcd& psi,
                 double tol, std::size_t mmax) {
  using Eigen::Index;
  const auto dim = static_cast<Index>(space.dim());
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return true;
  mmax = std::min<std::size_t>(mmax, static_cast<std::size_t>(dim));
  // Reused across calls; a fresh allocation of this size costs page faults.
  thread_local Eigen::MatrixXcd V;
  if (V.rows() != dim || V.cols() < static_cast<Index>(mmax) + 1) V.resize(dim, static_cast<Index>(mmax) + 1);
  std::vector<double> alpha, beta;
  V.col(0) = psi / beta0;
  Eigen::VectorXcd w(dim);
  const auto& d = space.diagonal();
  for (std::size_t j = 0; j < mmax; ++j) {
    const auto jj = static_cast<Index>(j);
    space.apply_x(V.col(jj).data(), w.data());
    for (Index i = 0; i < dim; ++i) w[i] = cx * w[i] + cz * d[static_cast<std::size_t>(i)] * V(i, jj);
    const double a = V.col(jj).dot(w).real();
    alpha.push_back(a);
    w -= a * V.col(jj);
    if (j > 0) w -= beta[j - 1] * V.col(jj - 1);
    const double b = w.norm();
    const auto m = static_cast<Index>(j + 1);
    const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(a)) || m == dim;
    if (!breakdown && m % 4 != 0 && j + 1 < mmax) {
      beta.push_back(b);
      V.col(jj + 1) = w / b;
      continue;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const auto& th = es.eigenvalues();
    const auto& Y = es.eigenvectors();
    Eigen::VectorXcd e(m);
    for (Index c = 0; c < m; ++c) e[c] = std::polar(Y(0, c), -tau * th[c]);
    const Eigen::VectorXcd f = Y.template cast<cplx>() * e;
    const double err = b * std::abs(f[m - 1]);
    if (err <= tol || breakdown) {
      psi = beta0 * (V.leftCols(m) * f);
      return true;
    }
    beta.push_back(b);
    V.col(jj + 1) = w / b;
  }
  return false;
}

}  // namespace detail

/// Norm-preserving integrator for i d/dt psi = 2 pi H(t) psi with
/// H(t) = cx(t) X + cz(t) D in GHz and t in ns. Each step is the fourth-order
/// commutator-free exponential
///   exp(-i dt (a1 H(t1) + a2 H(t2))) exp(-i dt (a2 H(t1) + a1 H(t2))),
/// each exponential applied by Krylov projection. Step size is adapted by
/// step doubling.
template <class Space, class Coeff>
class Propagator {
 public:
  Propagator(const Space& space, Coeff coeff, EvolveOptions opt = {})
      : space_(space), coeff_(std::move(coeff)), opt_(opt), dt_(opt.dt_initial) {}

  /// Advances psi from t0 to t1.
  void advance(Eigen::VectorXcd& psi, double t0, double t1) {
    double t = t0;
    while (t < t1) {
      if (++steps_ > opt_.max_steps) throw NumericalError("propagation step limit reached");
      double dt = std::min(dt_, t1 - t);
      const bool last = dt >= t1 - t;
      Eigen::VectorXcd big = psi, half = psi;
      const bool ok = step(big, t, dt) && step(half, t, dt / 2) && step(half, t + dt / 2, dt / 2);
      const double err = ok ? (big - half).norm() : std::numeric_limits<double>::infinity();
      if (!(err <= opt_.tol)) {
        dt_ = dt * (ok ? std::max(0.2, 0.9 * std::pow(opt_.tol / err, 0.2)) : 0.5);
        if (dt_ < opt_.dt_min)
          throw NumericalError("step size underflow at t=" + std::to_string(t) + " ns");
        continue;
      }
      psi = half;
      t = last ? t1 : t + dt;
      const double grow = err > 0 ? std::min(4.0, 0.9 * std::pow(opt_.tol / err, 0.2)) : 4.0;
      if (!last || grow < 1.0) dt_ = dt * grow;
    }
  }

  std::size_t steps() const noexcept { return steps_; }

 private:
  bool step(Eigen::VectorXcd& psi, double t, double dt) {
    static const double r3 = std::sqrt(3.0);
    const double a1 = (3.0 - 2.0 * r3) / 12.0, a2 = (3.0 + 2.0 * r3) / 12.0;
    const auto [x1, z1] = coeff_(t + (0.5 - r3 / 6.0) * dt);
    const auto [x2, z2] = coeff_(t + (0.5 + r3 / 6.0) * dt);
    const double tau = 2.0 * std::numbers::pi * dt;
    const double ktol = 0.05 * opt_.tol;
    return detail::krylov_expv(space_, a2 * x1 + a1 * x2, a2 * z1 + a1 * z2, tau, psi, ktol, opt_.krylov_max) &&
           detail::krylov_expv(space_, a1 * x1 + a2 * x2, a1 * z1 + a2 * z2, tau, psi, ktol, opt_.krylov_max);
  }

  const Space& space_;
  Coeff coeff_;
  EvolveOptions opt_;
  double dt_;
  std::size_t steps_ = 0;
};

struct PopulationTrace {
  std::vector<double> t_ns, P0, P1;
  double max_norm_error = 0.0;
  std::size_t steps = 0;
};

/// Evolves psi0 from t0 and records the populations of the two lowest
/// instantaneous eigenstates of H(t) = cx X + cz D at each output time.
template <class Space, class Coeff>
PopulationTrace evolve_populations(const Space& space, Coeff coeff, double t0,
                                   Eigen::VectorXcd psi, const std::vector<double>& output_times,
                                   const EvolveOptions& opt = {}) {
  Propagator<Space, Coeff> prop(space, coeff, opt);
  PopulationTrace out;
  double t = t0;
  for (double to : output_times) {
    if (to < t) throw InputError("output times must be non-decreasing and >= t0");
    prop.advance(psi, t, to);
    t = to;
    const auto [cx, cz] = coeff(t);
    auto eig = instantaneous_eigenpairs(space, -cx, cz, 2);
    out.t_ns.push_back(t);
    out.P0.push_back(std::norm(eig.vectors.col(0).template cast<cplx>().dot(psi)));
    out.P1.push_back(eig.vectors.cols() > 1 ? std::norm(eig.vectors.col(1).template cast<cplx>().dot(psi)) : 0.0);
    out.max_norm_error = std::max(out.max_norm_error, std::abs(psi.norm() - 1.0));
  }
  out.steps = prop.steps();
  return out;
}

/// Space used for closed-system evolution of a model started in the
/// driver-dominated ground state: the fully symmetric sector of the
/// problem's variable permutation symmetries (exact, since H(s) and the
/// initial state are invariant). Without symmetries this is the full space,
/// which is capped at 16 spins.
inline SymmetricSector evolution_space(const IsingProblem& problem) {
  SymmetricSector sector(problem);
  if (sector.dim() > (std::size_t{1} << max_full_propagation_spins))
    throw InputError("propagation space of dimension " + std::to_string(sector.dim()) +
                     " exceeds the 2^16 guard");
  return sector;
}

/// Closed-system anneal of length T_QA (ns) from the ground state of H(0).
/// P0, P1 are populations of the two lowest instantaneous eigenstates of the
/// symmetric sector, recorded at the requested times (ns, within [0, T_QA]).
inline PopulationTrace schrodinger_evolve(const QuantumModel& model, double T_QA,
                                          const std::vector<double>& output_times,
                                          const EvolveOptions& opt = {}) {
  if (!(T_QA > 0.0)) throw InputError("T_QA must be positive");
  const auto space = evolution_space(model.problem);
  auto coeff = [&](double t) {
    const auto p = model.schedule.eval(std::clamp(t / T_QA, 0.0, 1.0));
    return std::pair<double, double>{-p.A, p.B};
  };
  const auto p0 = model.schedule.eval(0.0);
  auto g = instantaneous_eigenpairs(space, p0.A, p0.B, 1);
  Eigen::VectorXcd psi = g.vectors.col(0).cast<cplx>();
  for (double t : output_times)
    if (t < 0.0 || t > T_QA * (1 + 1e-12)) throw InputError("output time outside [0, T_QA]");
  return evolve_populations(space, coeff, 0.0, psi, output_times, opt);
}

/// Final ground-state population after an anneal of length T_QA.
inline double final_ground_population(const QuantumModel& model, double T_QA,
                                      const EvolveOptions& opt = {}) {
  return schrodinger_evolve(model, T_QA, {T_QA}, opt).P0.back();
}

inline std::string trace_to_csv(const PopulationTrace& tr) {
  std::ostringstream out;
  out << "t_ns,P0,P1\n";
  char buf[96];
  for (std::size_t i = 0; i < tr.t_ns.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g,%.10f,%.10f\n", tr.t_ns[i], tr.P0[i], tr.P1[i]);
    out << buf;
  }
  return out.str();
}

}  // namespace tunnelbench::quantum
