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

#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tunnelbench/error.hpp"
#include "tunnelbench/ising.hpp"

namespace tunnelbench {

using json = nlohmann::json;

inline constexpr const char* kspin_format = "kspin-1";

struct InstanceMetadata {
  std::string generator;
  std::optional<std::uint64_t> seed;
  std::string pattern;
  std::optional<double> h1, h2;
  std::optional<SpinConfig> reference_optimum;
  std::optional<double> reference_energy;
  json extra = json::object();  // generator-specific keys, passed through
};

struct IsingInstance {
  IsingProblem problem;
  InstanceMetadata metadata;
};

inline json to_json(const IsingInstance& inst) {
  json terms = json::array();
  for (const auto& t : inst.problem.terms())
    terms.push_back({{"vars", t.vars}, {"c", t.coefficient}});
  const auto& m = inst.metadata;
  json meta = m.extra.is_object() ? m.extra : json::object();
  meta["generator"] = m.generator;
  if (m.seed) meta["seed"] = *m.seed;
  if (!m.pattern.empty()) meta["pattern"] = m.pattern;
  if (m.h1) meta["h1"] = *m.h1;
  if (m.h2) meta["h2"] = *m.h2;
  if (m.reference_optimum) {
    std::vector<int> s(m.reference_optimum->begin(), m.reference_optimum->end());
    meta["reference_optimum"] = s;
  }
  if (m.reference_energy) meta["reference_energy"] = *m.reference_energy;
  return {{"format", kspin_format},
          {"n", inst.problem.size()},
          {"terms", std::move(terms)},
          {"metadata", std::move(meta)}};
}

inline IsingInstance ising_instance_from_json(const json& j) {
  try {
    if (j.value("format", std::string{}) != kspin_format)
      throw InputError("instance format is not " + std::string(kspin_format));
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Term> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({t.at("vars").get<std::vector<VarIndex>>(), t.at("c").get<double>()});
    for (const auto& t : terms)
      for (auto v : t.vars)
        if (v >= n) throw InputError("term variable " + std::to_string(v) + " out of range");
    IsingInstance out{IsingProblem(n, std::move(terms)), {}};
    if (j.contains("metadata")) {
      const auto& meta = j["metadata"];
      auto& m = out.metadata;
      m.generator = meta.value("generator", std::string{});
      if (meta.contains("seed")) m.seed = meta["seed"].get<std::uint64_t>();
      m.pattern = meta.value("pattern", std::string{});
      if (meta.contains("h1")) m.h1 = meta["h1"].get<double>();
      if (meta.contains("h2")) m.h2 = meta["h2"].get<double>();
      if (meta.contains("reference_optimum")) {
        SpinConfig s;
        for (int v : meta["reference_optimum"].get<std::vector<int>>()) {
          if (v != 1 && v != -1) throw InputError("reference_optimum holds a non-spin value");
          s.push_back(static_cast<Spin>(v));
        }
        out.problem.check_length(s.size());
        m.reference_optimum = std::move(s);
      }
      if (meta.contains("reference_energy"))
        m.reference_energy = meta["reference_energy"].get<double>();
      m.extra = meta;
      for (const char* k : {"generator", "seed", "pattern", "h1", "h2", "reference_optimum",
                            "reference_energy"})
        m.extra.erase(k);
    }
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed instance: ") + e.what());
  }
}

/// Plain-text 2-local format: one "i j J" per line, i == j meaning a field on
/// i. Blank lines and lines starting with '#' or 'c' are skipped. n is one
/// past the largest index seen.
inline IsingProblem parse_text_instance(std::istream& in) {
  std::vector<Term> terms;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == 'c') continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double c = 0;
    if (!(ls >> i >> j >> c) || i < 0 || j < 0)
      throw InputError("bad line " + std::to_string(lineno) + ": '" + line + "'");
    std::string rest;
    if (ls >> rest) throw InputError("trailing text on line " + std::to_string(lineno));
    n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(i, j)) + 1);
    if (i == j)
      terms.push_back({{static_cast<VarIndex>(i)}, c});
    else
      terms.push_back({{static_cast<VarIndex>(i), static_cast<VarIndex>(j)}, c});
  }
  if (n == 0) throw InputError("text instance has no terms");
  return IsingProblem(n, std::move(terms));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write to '" + path + "' failed");
}

/// Reads either the JSON format or the plain-text format, by first character.
inline IsingInstance read_ising_instance(const std::string& path) {
  const auto text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw InputError("'" + path + "': " + e.what());
    }
    return ising_instance_from_json(j);
  }
  std::istringstream in(text);
  IsingInstance out{parse_text_instance(in), {}};
  out.metadata.generator = "text";
  return out;
}

inline void write_ising_instance(const std::string& path, const IsingInstance& inst) {
  write_file(path, to_json(inst).dump(1) + "\n");
}

}  // namespace tunnelbench
