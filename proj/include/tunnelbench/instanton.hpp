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
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"
#include "tunnelbench/quantum/rate.hpp"

namespace tunnelbench::instanton {

/// Single-angle potential of a domain of D spins that tunnel together:
///   upsilon(theta, phi) = -A sin(theta) cosh(phi) - B g(cos theta).
/// g is given in this (negated) sign: for a cost E(M) of total
/// magnetization M in the library's +B H_P convention, g(x) = -E(D x)/D.
struct ReducedPotential {
  double A = 0.0;  // GHz
  double B = 0.0;  // GHz
  std::function<double(double)> g;
  int D = 1;

  double upsilon(double theta, double phi = 0.0) const {
    return -A * std::sin(theta) * std::cosh(phi) - B * g(std::cos(theta));
  }

  void validate() const {
    if (!g) throw InputError("reduced potential needs g");
    if (!(A > 0.0)) throw InputError("reduced potential needs A > 0");
    if (!(B >= 0.0)) throw InputError("reduced potential needs B >= 0");
    if (D < 1) throw InputError("domain size must be >= 1");
  }
};

/// g for a cost written as a function of the total magnetization M in
/// [-D, D] with the library's sign (H = -A sum sigma^x + B E).
inline std::function<double(double)> rescaled_cost(std::function<double(double)> E, int D) {
  return [E = std::move(E), D](double x) { return -E(D * x) / D; };
}

/// Local minima of upsilon(theta, 0) on [0, pi]: 1e3-point scan, Brent
/// refinement. Sorted by theta.
inline std::vector<double> potential_minima(const ReducedPotential& pot) {
  pot.validate();
  constexpr int n = 1000;
  const double h = std::numbers::pi / n;
  std::vector<double> u(n + 1);
  for (int i = 0; i <= n; ++i) u[i] = pot.upsilon(i * h);
  std::vector<double> out;
  auto f = [&](double t) { return pot.upsilon(t); };
  for (int i = 1; i < n; ++i) {
    if (!(u[i] < u[i - 1] && u[i] <= u[i + 1])) continue;
    auto r = boost::math::tools::brent_find_minima(f, (i - 1) * h, (i + 1) * h, 52);
    out.push_back(r.first);
  }
  return out;
}

enum class WkbVariant {
  deep_well,     // v^2 = B^2 (g - g0)^2 - A^2 sin^2, integrated where v^2 >= 0
  exact_energy,  // v^2 from conservation of upsilon: (A sin0 + B (g0 - g))^2 - A^2 sin^2
};

struct WkbResult {
  double a_min = 0.0;  // a_min / hbar
  double theta0 = 0.0, theta1 = 0.0;
  bool barrier = false;
  std::vector<std::pair<double, double>> intervals;  // integration support
  double error_estimate = 0.0;
};

/// a_min/hbar = int arcsinh(v / (A sin theta)) sin theta dtheta between the
/// two lowest minima of upsilon (theta0 < theta1).
inline WkbResult wkb_action(const ReducedPotential& pot, WkbVariant variant = WkbVariant::deep_well) {
  auto minima = potential_minima(pot);
  WkbResult res;
  if (minima.size() < 2) return res;
  std::stable_sort(minima.begin(), minima.end(),
                   [&](double a, double b) { return pot.upsilon(a) < pot.upsilon(b); });
  res.theta0 = std::min(minima[0], minima[1]);
  res.theta1 = std::max(minima[0], minima[1]);
  res.barrier = true;

  const double A = pot.A, B = pot.B;
  const double g0 = pot.g(std::cos(res.theta0)), s0 = std::sin(res.theta0);
  auto v2 = [&](double t) {
    const double dg = g0 - pot.g(std::cos(t)), st = A * std::sin(t);
    const double lhs = variant == WkbVariant::deep_well ? B * dg : A * s0 + B * dg;
    return lhs * lhs - st * st;
  };

  // Support of v^2 >= 0 by scan plus bracketing.
  constexpr int n = 2000;
  const double a = res.theta0, b = res.theta1, h = (b - a) / n;
  auto root = [&](double lo, double hi) {
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(v2, lo, hi, tol, it);
    return 0.5 * (r.first + r.second);
  };
  double start = 0.0;
  bool inside = v2(a) >= 0.0;
  if (inside) start = a;
  for (int i = 1; i <= n; ++i) {
    const double t = i == n ? b : a + i * h, tp = a + (i - 1) * h;
    const bool pos = v2(t) >= 0.0;
    if (pos && !inside) {
      start = root(tp, t);
      inside = true;
    } else if (!pos && inside) {
      res.intervals.emplace_back(start, root(tp, t));
      inside = false;
    }
  }
  if (inside) res.intervals.emplace_back(start, b);
  if (res.intervals.empty()) throw NumericalError("v^2 < 0 on the whole interval between minima");

  auto integrand = [&](double t) {
    const double st = std::sin(t);
    return std::asinh(std::sqrt(std::max(v2(t), 0.0)) / (A * st)) * st;
  };
  boost::math::quadrature::tanh_sinh<double> q;
  for (auto [lo, hi] : res.intervals) {
    if (!(hi > lo)) continue;
    double err = 0.0;
    res.a_min += q.integrate(integrand, lo, hi, 1e-10, &err);
    res.error_estimate += err;
  }
  return res;
}

/// Maximum-spin (Dicke) sector of H = -A sum sigma^x - B D g(M/D) for
/// D spins: tridiagonal of size D+1 in the sigma^z total basis.
inline Eigen::VectorXd curie_weiss_levels(const ReducedPotential& pot, int D) {
  pot.validate();
  if (D < 1) throw InputError("domain size must be >= 1");
  const double S = 0.5 * D;
  Eigen::VectorXd diag(D + 1), off(D);
  for (int k = 0; k <= D; ++k) {
    const double m = -S + k;  // S_z
    diag[k] = -pot.B * D * pot.g(2.0 * m / D);
    if (k < D) off[k] = -pot.A * std::sqrt(S * (S + 1) - m * (m + 1));  // -A * 2 <m+1|S_x|m>
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// E1 - E0 of the maximum-spin sector.
inline double curie_weiss_splitting(const ReducedPotential& pot, int D) {
  const auto e = curie_weiss_levels(pot, D);
  if (e.size() < 2) throw InputError("need at least two levels");
  return e[1] - e[0];
}

/// Least-squares slope of -ln(splitting) against D.
inline double splitting_slope(const ReducedPotential& pot, const std::vector<int>& Ds) {
  if (Ds.size() < 2) throw InputError("need at least two domain sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int D : Ds) {
    const double y = -std::log(curie_weiss_splitting(pot, D));
    sx += D;
    sy += y;
    sxx += double(D) * D;
    sxy += D * y;
  }
  const double n = static_cast<double>(Ds.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Product-state energy with <sigma^x> = sin(theta) cosh(phi) and
/// <sigma^z> = cos(theta) (phi is the imaginary part of the azimuth):
///   -A sum_j sin cosh + B H_P(cos theta).
inline double mean_field_energy(const std::vector<double>& theta, const std::vector<double>& phi,
                                const IsingProblem& problem, double A, double B) {
  problem.check_length(theta.size());
  problem.check_length(phi.size());
  double e = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) e -= A * std::sin(theta[j]) * std::cosh(phi[j]);
  for (const auto& t : problem.terms()) {
    double z = t.coefficient;
    for (auto v : t.vars) z *= std::cos(theta[v]);
    e -= B * z;
  }
  return e;
}

/// Imaginary-time path: theta[j][k], phi[j][k] for spin j at tau[k].
struct SpinPath {
  std::vector<double> tau;
  std::vector<std::vector<double>> theta, phi;

  std::size_t spins() const noexcept { return theta.size(); }
  std::size_t points() const noexcept { return tau.size(); }

  static constexpr double periodic_tolerance = 1e-9;

  void validate() const {
    if (tau.size() < 2) throw InputError("path needs at least two time points");
    for (std::size_t k = 1; k < tau.size(); ++k)
      if (!(tau[k] > tau[k - 1])) throw InputError("path times must be increasing");
    if (theta.empty() || theta.size() != phi.size()) throw InputError("path theta/phi spin counts differ");
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (theta[j].size() != tau.size() || phi[j].size() != tau.size())
        throw InputError("path spin " + std::to_string(j) + " has the wrong length");
      for (double t : theta[j])
        if (!(t >= 0.0 && t <= std::numbers::pi)) throw InputError("theta outside [0, pi]");
      if (std::abs(theta[j].front() - theta[j].back()) > periodic_tolerance ||
          std::abs(phi[j].front() - phi[j].back()) > periodic_tolerance)
        throw InputError("path is not periodic in spin " + std::to_string(j));
    }
  }
};

namespace detail {

inline double slice_energy(const SpinPath& p, std::size_t k, const IsingProblem& problem, double A, double B,
                           std::vector<double>& th, std::vector<double>& ph) {
  th.resize(p.spins());
  ph.resize(p.spins());
  for (std::size_t j = 0; j < p.spins(); ++j) {
    th[j] = p.theta[j][k];
    ph[j] = p.phi[j][k];
  }
  return mean_field_energy(th, ph, problem, A, B);
}

inline double berry_segment(const SpinPath& p, std::size_t j, std::size_t k) {
  const double c = 1.0 - 0.5 * (std::cos(p.theta[j][k]) + std::cos(p.theta[j][k + 1]));
  return c * (p.phi[j][k + 1] - p.phi[j][k]);
}

inline double trapezoid_weight(const SpinPath& p, std::size_t k) {
  double w = 0.0;
  if (k > 0) w += 0.5 * (p.tau[k] - p.tau[k - 1]);
  if (k + 1 < p.points()) w += 0.5 * (p.tau[k + 1] - p.tau[k]);
  return w;
}

}  // namespace detail

/// S/hbar = 1/2 sum_j omega[n_j] + int V dtau, omega = int (1 - cos theta) dphi,
/// both by the trapezoidal rule on the path grid.
inline double action_functional(const SpinPath& path, const IsingProblem& problem, double A, double B) {
  path.validate();
  problem.check_length(path.spins());
  std::vector<double> th, ph;
  double s = 0.0;
  for (std::size_t k = 0; k < path.points(); ++k)
    s += detail::trapezoid_weight(path, k) * detail::slice_energy(path, k, problem, A, B, th, ph);
  for (std::size_t j = 0; j < path.spins(); ++j)
    for (std::size_t k = 0; k + 1 < path.points(); ++k) s += 0.5 * detail::berry_segment(path, j, k);
  return s;
}

/// Single-spin functional a[n] = omega/2 + int upsilon dtau on a one-spin path.
inline double reduced_action(const SpinPath& path, const ReducedPotential& pot) {
  path.validate();
  if (path.spins() != 1) throw InputError("reduced action takes a single-spin path");
  double s = 0.0;
  for (std::size_t k = 0; k < path.points(); ++k)
    s += detail::trapezoid_weight(path, k) * pot.upsilon(path.theta[0][k], path.phi[0][k]);
  for (std::size_t k = 0; k + 1 < path.points(); ++k) s += 0.5 * detail::berry_segment(path, 0, k);
  return s;
}

struct PolishOptions {
  std::size_t max_sweeps = 200;
  double step = 0.05;
  double min_step = 1e-6;
};

struct PolishResult {
  SpinPath path;
  double action = 0.0;
  std::size_t sweeps = 0;
};

/// Coordinate descent on interior path points (endpoints held fixed so the
/// path stays periodic). Local optimum only.
inline PolishResult polish_path(SpinPath path, const IsingProblem& problem, double A, double B,
                                const PolishOptions& opt = {}) {
  path.validate();
  problem.check_length(path.spins());
  const std::size_t K = path.points();
  std::vector<double> th, ph;
  std::vector<double> V(K);
  for (std::size_t k = 0; k < K; ++k) V[k] = detail::slice_energy(path, k, problem, A, B, th, ph);

  // Part of the action touched by spin j at slice k.
  auto local = [&](std::size_t j, std::size_t k, double Vk) {
    return detail::trapezoid_weight(path, k) * Vk +
           0.5 * (detail::berry_segment(path, j, k - 1) + detail::berry_segment(path, j, k));
  };
  double step = opt.step;
  PolishResult out;
  while (out.sweeps < opt.max_sweeps && step >= opt.min_step) {
    ++out.sweeps;
    bool improved = false;
    for (std::size_t k = 1; k + 1 < K; ++k)
      for (std::size_t j = 0; j < path.spins(); ++j)
        for (int coord = 0; coord < 2; ++coord) {
          double& x = coord == 0 ? path.theta[j][k] : path.phi[j][k];
          const double x0 = x, before = local(j, k, V[k]);
          double best = before, best_x = x0, best_V = V[k];
          for (double d : {step, -step}) {
            x = x0 + d;
            if (coord == 0 && !(x >= 0.0 && x <= std::numbers::pi)) continue;
            const double Vk = detail::slice_energy(path, k, problem, A, B, th, ph);
            const double after = local(j, k, Vk);
            if (after < best - 1e-15) {
              best = after;
              best_x = x;
              best_V = Vk;
            }
          }
          x = best_x;
          V[k] = best_V;
          if (best_x != x0) improved = true;
        }
    if (!improved) step *= 0.5;
  }
  out.action = action_functional(path, problem, A, B);
  out.path = std::move(path);
  return out;
}

/// CSV "tau,theta_1,phi_1,...".
inline std::string path_to_csv(const SpinPath& path) {
  path.validate();
  std::ostringstream out;
  out << "tau";
  for (std::size_t j = 1; j <= path.spins(); ++j) out << ",theta_" << j << ",phi_" << j;
  out << '\n';
  char buf[40];
  for (std::size_t k = 0; k < path.points(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", path.tau[k]);
    out << buf;
    for (std::size_t j = 0; j < path.spins(); ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", path.theta[j][k]);
      out << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", path.phi[j][k]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

inline SpinPath parse_path_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SpinPath p;
  std::size_t cols = 0, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("tau", 0) == 0) {
      cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
      if (cols < 3 || cols % 2 == 0) throw InputError("path header must be tau,theta_1,phi_1,...");
      p.theta.assign((cols - 1) / 2, {});
      p.phi.assign((cols - 1) / 2, {});
      continue;
    }
    if (cols == 0) throw InputError("path CSV missing header");
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw InputError("path CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (vals.size() != cols) throw InputError("path CSV line " + std::to_string(lineno) + ": wrong column count");
    p.tau.push_back(vals[0]);
    for (std::size_t j = 0; j < p.theta.size(); ++j) {
      p.theta[j].push_back(vals[1 + 2 * j]);
      p.phi[j].push_back(vals[2 + 2 * j]);
    }
  }
  p.validate();
  return p;
}

/// Quantum tunnelling exponent D * a_min/hbar.
inline double rate_exponent(double D, double a_min) {
  if (D < 0.0 || a_min < 0.0) throw InputError("rate exponent needs D >= 0 and a_min >= 0");
  return D * a_min;
}

struct ThermalComparison {
  double quantum_exponent = 0.0;  // alpha D
  double thermal_exponent = 0.0;  // Delta E / k_B T
  bool tunnelling_favoured = false;  // Delta E / k_B T > alpha D
};

/// Compares D a_min against Delta E / k_B T (Delta E in GHz, T in mK).
inline ThermalComparison compare_thermal(double D, double a_min, double delta_E_GHz, double T_mK) {
  ThermalComparison c;
  c.quantum_exponent = rate_exponent(D, a_min);
  c.thermal_exponent = delta_E_GHz / quantum::temperature_to_frequency(T_mK);
  c.tunnelling_favoured = c.thermal_exponent > c.quantum_exponent;
  return c;
}

}  // namespace tunnelbench::instanton
