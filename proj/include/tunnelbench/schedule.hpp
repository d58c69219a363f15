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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tunnelbench/error.hpp"
#include "tunnelbench/instance_io.hpp"

namespace tunnelbench {

/// Annealing schedule A(s), B(s) in GHz (linear frequency), s in [0, 1].
///
/// The linear kind is A(s) = A0 (1 - s), B(s) = B0 s. The tabulated kind
/// interpolates linearly between strictly increasing s points covering [0, 1].
class AnnealSchedule {
 public:
  enum class Kind { linear, tabulated };

  struct Point {
    double s, A, B;
  };

  static AnnealSchedule linear(double A0 = 1.0, double B0 = 1.0) {
    if (!(A0 >= 0.0) || !(B0 >= 0.0)) throw InputError("linear schedule needs A0, B0 >= 0");
    AnnealSchedule out;
    out.kind_ = Kind::linear;
    out.A0_ = A0;
    out.B0_ = B0;
    out.points_ = {{0.0, A0, 0.0}, {1.0, 0.0, B0}};
    out.metadata_["name"] = "linear";
    return out;
  }

  static AnnealSchedule tabulated(std::vector<Point> points,
                                  std::map<std::string, std::string> metadata = {}) {
    if (points.size() < 2) throw InputError("tabulated schedule needs at least two points");
    if (points.front().s != 0.0 || points.back().s != 1.0)
      throw InputError("tabulated schedule must start at s=0 and end at s=1");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      if (!(p.A >= 0.0) || !(p.B >= 0.0)) throw InputError("schedule has negative A or B");
      if (i > 0 && !(p.s > points[i - 1].s)) throw InputError("schedule s values not strictly increasing");
    }
    AnnealSchedule out;
    out.kind_ = Kind::tabulated;
    out.points_ = std::move(points);
    out.metadata_ = std::move(metadata);
    return out;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

  std::string name() const {
    auto it = metadata_.find("name");
    return it == metadata_.end() ? std::string{} : it->second;
  }

  double A(double s) const { return eval(s).A; }
  double B(double s) const { return eval(s).B; }

  Point eval(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("schedule evaluated outside [0, 1]");
    if (kind_ == Kind::linear) return {s, A0_ * (1.0 - s), B0_ * s};
    auto it = std::upper_bound(points_.begin(), points_.end(), s,
                               [](double x, const Point& p) { return x < p.s; });
    if (it == points_.end()) return points_.back();
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double f = (s - lo.s) / (hi.s - lo.s);
    return {s, lo.A + f * (hi.A - lo.A), lo.B + f * (hi.B - lo.B)};
  }

 private:
  Kind kind_ = Kind::linear;
  double A0_ = 1.0, B0_ = 1.0;
  std::vector<Point> points_{{0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}};
  std::map<std::string, std::string> metadata_{{"name", "linear"}};
};

/// Parses "s,A_GHz,B_GHz" CSV. Lines "# key: value" before the data are
/// metadata; a header row is optional. The result is always tabulated.
inline AnnealSchedule parse_schedule_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<AnnealSchedule::Point> pts;
  std::map<std::string, std::string> meta;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto trim = [](std::string v) {
          v.erase(0, v.find_first_not_of(" \t#"));
          v.erase(v.find_last_not_of(" \t") + 1);
          return v;
        };
        meta[trim(line.substr(1, colon - 1))] = trim(line.substr(colon + 1));
      }
      continue;
    }
    if (line.rfind("s,", 0) == 0) continue;
    AnnealSchedule::Point p{};
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> p.s >> c1 >> p.A >> c2 >> p.B) || c1 != ',' || c2 != ',')
      throw InputError("bad schedule row " + std::to_string(lineno) + ": '" + line + "'");
    pts.push_back(p);
  }
  return AnnealSchedule::tabulated(std::move(pts), std::move(meta));
}

inline AnnealSchedule read_schedule_csv(const std::string& path) {
  auto sched = parse_schedule_csv(read_file(path));
  return sched;
}

inline std::string schedule_to_csv(const AnnealSchedule& sched, std::size_t rows = 101) {
  std::ostringstream out;
  for (const auto& [k, v] : sched.metadata()) out << "# " << k << ": " << v << "\n";
  out << "s,A_GHz,B_GHz\n";
  char buf[96];
  auto row = [&](double s) {
    auto p = sched.eval(s);
    std::snprintf(buf, sizeof buf, "%.4f,%.9f,%.9f\n", s, p.A, p.B);
    out << buf;
  };
  if (sched.kind() == AnnealSchedule::Kind::tabulated) {
    for (const auto& p : sched.points()) row(p.s);
  } else {
    for (std::size_t i = 0; i < rows; ++i) row(static_cast<double>(i) / static_cast<double>(rows - 1));
  }
  return out.str();
}

/// Closed-form approximation of the D-Wave 2X schedule shipped as
/// data/schedules/dw2x-approx.csv. Calibrated so that the weak-strong pair
/// has its avoided crossing near s = 0.62 with a gap near 0.25 GHz; it is
/// not a digitization of measured curves.
inline AnnealSchedule dw2x_approx_formula(std::size_t rows = 101) {
  std::vector<AnnealSchedule::Point> pts;
  for (std::size_t i = 0; i < rows; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(rows - 1);
    pts.push_back({s, 6.0 * std::pow(1.0 - s, 1.2886), 0.1 + 2.4 * std::pow(s, 2.4414)});
  }
  return AnnealSchedule::tabulated(
      std::move(pts),
      {{"name", "dw2x-approx"},
       {"approximate", "true"},
       {"formula", "A=6.0*(1-s)^1.2886, B=0.1+2.4*s^2.4414 (GHz)"},
       {"note", "calibrated closed form, not digitized from measurement"}});
}

#ifdef TUNNELBENCH_DATA_DIR
inline std::string data_path(const std::string& rel) { return std::string(TUNNELBENCH_DATA_DIR) + "/" + rel; }
#endif

/// Resolves "linear", "dw2x-approx" or a CSV path.
inline AnnealSchedule load_schedule(const std::string& spec) {
  if (spec == "linear") return AnnealSchedule::linear();
  if (spec == "dw2x-approx") return dw2x_approx_formula();
  return read_schedule_csv(spec);
}

}  // namespace tunnelbench
