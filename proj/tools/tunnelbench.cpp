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

// tunnelbench command line: generate -> solve -> bench, plus npp-study.
// Exit codes: 0 ok, 1 input error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "tunnelbench/tunnelbench.hpp"

namespace fs = std::filesystem;
using namespace tunnelbench;
using tunnelbench::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string out;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(t, &pos));
      if (pos != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + t + "'");
    }
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (double d : parse_doubles(s)) {
    if (d < 1 || d != std::floor(d)) throw InputError("sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(d));
  }
  return out;
}

// "RxC" grid shape
std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw InputError("grid size must look like 2x4, got '" + s + "'");
  try {
    return {std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw InputError("grid size must look like 2x4, got '" + s + "'");
  }
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

void ensure_dir(const std::string& d) {
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw InputError("cannot create directory " + d + ": " + ec.message());
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::size_t count = 1;
  std::string sizes = "1x2";
  std::string pattern = "columns";
  double h1 = default_weak_field, h2 = default_strong_field;
  std::size_t n = 16;
  std::string topology = "chimera";
  std::string couplings = "pm1";
  bool fields = false;
  std::size_t npp_n = 20;
  unsigned bits = 0;
};

int cmd_generate(const Common& c, const GenerateArgs& g) {
  if (c.out.empty()) throw InputError("generate needs --out <directory>");
  ensure_dir(c.out);
  std::size_t written = 0;
  char name[128];
  if (g.kind == "weak-strong-pair") {
    IsingInstance inst{weak_strong_pair(g.h1, g.h2), {}};
    inst.metadata.generator = "weak-strong-pair";
    inst.metadata.h1 = g.h1;
    inst.metadata.h2 = g.h2;
    const auto gs = brute_force_ground_state(inst.problem);
    inst.metadata.reference_optimum = gs.config;
    inst.metadata.reference_energy = gs.energy;
    write_ising_instance(c.out + "/pair.json", inst);
    written = 1;
  } else if (g.kind == "weak-strong-network") {
    const auto pattern = domino_pattern_from_string(g.pattern);
    for (const auto& shape : split(g.sizes, ',')) {
      const auto [rows, cols] = parse_grid(shape);
      const auto graph = build_chimera(rows, cols);
      for (std::size_t i = 0; i < g.count; ++i) {
        const auto seed = derive_seed(c.seed, {rows, cols, i});
        auto net = weak_strong_network(graph, pattern, seed, g.h1, g.h2);
        IsingInstance inst{std::move(net.problem), {}};
        auto& m = inst.metadata;
        m.generator = "weak-strong-network";
        m.seed = seed;
        m.pattern = to_string(pattern);
        m.h1 = g.h1;
        m.h2 = g.h2;
        m.reference_optimum = net.reference_optimum;
        m.reference_energy = net.reference_energy;
        m.extra["rows"] = rows;
        m.extra["cols"] = cols;
        std::snprintf(name, sizeof name, "/network_%zux%zu_%03zu.json", rows, cols, i);
        write_ising_instance(c.out + name, inst);
        ++written;
      }
    }
  } else if (g.kind == "random-ising") {
    RandomIsingSpec spec;
    spec.n = g.n;
    if (g.topology == "complete") {
      spec.topology = Topology::complete;
    } else if (g.topology == "chimera") {
      spec.topology = Topology::chimera;
      const auto [rows, cols] = parse_grid(g.sizes);
      spec.rows = rows;
      spec.cols = cols;
      spec.n = 8 * rows * cols;
    } else {
      throw InputError("unknown topology '" + g.topology + "' (complete, chimera)");
    }
    if (g.couplings == "pm1")
      spec.couplings = CouplingSet::plus_minus_one;
    else if (g.couplings == "gaussian")
      spec.couplings = CouplingSet::gaussian;
    else
      throw InputError("unknown coupling set '" + g.couplings + "' (pm1, gaussian)");
    spec.fields = g.fields;
    for (std::size_t i = 0; i < g.count; ++i) {
      const auto seed = derive_seed(c.seed, i);
      IsingInstance inst{random_ising(spec, seed), {}};
      inst.metadata.generator = "random-ising";
      inst.metadata.seed = seed;
      inst.metadata.extra["topology"] = g.topology;
      inst.metadata.extra["couplings"] = g.couplings;
      if (inst.problem.size() <= brute_force_max_variables) {
        const auto gs = brute_force_ground_state(inst.problem);
        inst.metadata.reference_optimum = gs.config;
        inst.metadata.reference_energy = gs.energy;
      }
      std::snprintf(name, sizeof name, "/random_%zu_%03zu.json", inst.problem.size(), i);
      write_ising_instance(c.out + name, inst);
      ++written;
    }
  } else if (g.kind == "npp") {
    const unsigned b = g.bits == 0 ? static_cast<unsigned>(g.npp_n) : g.bits;
    for (std::size_t i = 0; i < g.count; ++i) {
      const auto inst = npp::generate_npp(g.npp_n, b, derive_seed(c.seed, i));
      std::snprintf(name, sizeof name, "/npp_%zu_%03zu.json", g.npp_n, i);
      npp::write_npp_instance(c.out + name, inst);
      ++written;
    }
  } else {
    throw InputError("unknown kind '" + g.kind +
                     "' (weak-strong-pair, weak-strong-network, random-ising, npp)");
  }
  std::cerr << "wrote " << written << " instance file(s) to " << c.out << "\n";
  return 0;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string algorithm;
  std::vector<std::string> files;
  std::size_t runs = 100;
  std::size_t sweeps = 1000;
  double beta_init = 0.1, beta_final = 3.0;
  bool geometric = false;
  double beta = 10.0;
  std::size_t trotter = 64;
  std::string schedule = "dw2x-approx";
  std::string boundary = "periodic";
  std::string readout = "slice0";
  std::size_t levels = 3;
  std::size_t points = 101;
  double anneal_ns = 0.0;
};

// Loaded instance: Ising or NPP.
struct Loaded {
  std::string id;
  std::optional<IsingInstance> ising;
  std::optional<npp::NppInstance> npp;
  std::size_t N = 0;
};

Loaded load_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception&) {
    // not JSON; plain-text 2-local format
    Loaded l;
    l.id = stem(path);
    std::istringstream in(read_file(path));
    l.ising = IsingInstance{parse_text_instance(in), {}};
    l.N = l.ising->problem.size();
    return l;
  }
  Loaded l;
  l.id = stem(path);
  if (j.value("format", std::string{}) == npp::npp_format) {
    l.npp = npp::npp_instance_from_json(j);
    l.N = l.npp->size();
  } else {
    l.ising = ising_instance_from_json(j);
    l.N = l.ising->problem.size();
  }
  return l;
}

// Reference energy: metadata, else exhaustive when small enough.
std::optional<double> ising_reference(IsingInstance& inst) {
  if (inst.metadata.reference_energy) return inst.metadata.reference_energy;
  if (inst.problem.size() <= brute_force_max_variables) {
    const auto gs = brute_force_ground_state(inst.problem);
    inst.metadata.reference_energy = gs.energy;
    return gs.energy;
  }
  return std::nullopt;
}

std::uint64_t instance_stream(const std::string& id) {
  return std::stoull(bench::fnv1a_hex(id), nullptr, 16);
}

std::vector<bench::BenchmarkRecord> solve_instance(const Common& c, const SolveArgs& a, Loaded& l) {
  std::vector<bench::BenchmarkRecord> recs;
  bench::BenchmarkRecord base;
  base.instance_id = l.id;
  base.algorithm = a.algorithm;
  base.N = l.N;

  auto error_record = [&](const std::string& what) {
    auto r = base;
    r.params_digest = bench::params_digest(r.params);
    r.error = what;
    r.energy = infinity;
    return std::vector<bench::BenchmarkRecord>{r};
  };

  if (a.algorithm == "sa") {
    SaSchedule s{a.beta_init, a.beta_final, a.sweeps,
                 a.geometric ? BetaInterpolation::geometric : BetaInterpolation::linear,
                 SweepOrder::sequential};
    s.validate();
    base.params = {{"beta_init", s.beta_init},
                   {"beta_final", s.beta_final},
                   {"n_sweeps", s.n_sweeps},
                   {"interpolation", a.geometric ? "geometric" : "linear"}};
    base.params_digest = bench::params_digest(base.params);
    base.n_sweeps = s.n_sweeps;
    base.run_seconds = bench::sa_effort_seconds(double(s.n_sweeps), double(l.N));
    base.constants = {{"T_su_seconds", constants::sa_spin_update_seconds}};
    std::optional<double> ref;
    std::optional<npp::BigInt> ref_E;
    if (l.ising) {
      ref = ising_reference(*l.ising);
    } else {
      if (l.N > npp::npp_brute_force_max) throw InputError(l.id + ": NPP reference needs N <= 30");
      auto opt = npp::npp_brute_force(*l.npp);
      ref_E = opt.E;
      ref = opt.E_real(l.npp->b);
    }
    base.reference_energy = ref;
    CouplingGraph graph;
    const CouplingGraph* gp = nullptr;
    if (l.ising && l.ising->problem.is_two_local()) {
      graph = CouplingGraph::from(l.ising->problem);
      gp = &graph;
    }
    recs.resize(a.runs, base);
    const auto stream = derive_seed(c.seed, instance_stream(l.id));
    parallel_for(a.runs, c.workers, [&](std::size_t r) {
      auto& rec = recs[r];
      rec.seed = derive_seed(stream, r);
      if (l.ising) {
        rec.energy = sa_run(l.ising->problem, s, rec.seed, gp).energy;
        rec.success = ref && rec.energy <= *ref + 1e-9;
      } else {
        const auto p = npp::npp_sa_run(*l.npp, s, rec.seed);
        rec.energy = p.E_real(l.npp->b);
        rec.success = p.E <= *ref_E;
      }
    });
    return recs;
  }

  if (a.algorithm == "qmc") {
    QmcParams p;
    p.beta = a.beta;
    p.trotter = a.trotter;
    p.n_sweeps = a.sweeps;
    p.boundary = boundary_from_string(a.boundary);
    p.readout = readout_from_string(a.readout);
    base.params = {{"beta", p.beta},
                   {"trotter", p.trotter},
                   {"n_sweeps", p.n_sweeps},
                   {"schedule", a.schedule},
                   {"boundary", a.boundary},
                   {"readout", a.readout}};
    base.beta = p.beta;
    base.n_sweeps = p.n_sweeps;
    if (!l.ising) return error_record("QMC needs an Ising instance");
    if (!l.ising->problem.is_two_local()) return error_record("QMC supports 2-local problems only");
    const auto kind = a.schedule == "linear" ? bench::QmcScheduleKind::linear : bench::QmcScheduleKind::dw2x;
    base.params_digest = bench::params_digest(base.params);
    base.run_seconds = bench::qmc_effort_seconds(double(p.n_sweeps), double(l.N), p.beta, kind);
    base.constants = {{"T_worldline_per_beta_seconds", kind == bench::QmcScheduleKind::linear
                                                           ? constants::qmc_worldline_seconds_per_beta_linear
                                                           : constants::qmc_worldline_seconds_per_beta_dw2x}};
    const auto sched = load_schedule(a.schedule);
    const auto ref = ising_reference(*l.ising);
    base.reference_energy = ref;
    recs.resize(a.runs, base);
    const auto stream = derive_seed(c.seed, instance_stream(l.id));
    parallel_for(a.runs, c.workers, [&](std::size_t r) {
      auto& rec = recs[r];
      rec.seed = derive_seed(stream, r);
      rec.energy = qmc_anneal(l.ising->problem, sched, p, rec.seed).energy;
      rec.success = ref && rec.energy <= *ref + 1e-9;
    });
    return recs;
  }

  if (a.algorithm == "brute") {
    base.params_digest = bench::params_digest(base.params);
    base.n_sweeps = 0;
    if (l.ising) {
      const auto gs = brute_force_ground_state(l.ising->problem);
      base.energy = gs.energy;
      base.reference_energy = l.ising->metadata.reference_energy;
      base.success = !base.reference_energy || gs.energy <= *base.reference_energy + 1e-9;
      if (base.reference_energy && std::abs(gs.energy - *base.reference_energy) > 1e-9)
        std::cerr << l.id << ": exhaustive energy " << gs.energy << " differs from metadata "
                  << *base.reference_energy << "\n";
    } else {
      const auto opt = npp::npp_brute_force(*l.npp);
      base.energy = opt.E_real(l.npp->b);
      base.success = true;
    }
    return {base};
  }

  throw InputError("unknown algorithm '" + a.algorithm + "' (sa, qmc, exact, brute)");
}

int cmd_exact(const Common& c, const SolveArgs& a) {
  if (a.files.size() != 1) throw InputError("exact takes exactly one instance file");
  auto l = load_instance(a.files[0]);
  if (!l.ising) throw InputError("exact needs an Ising instance");
  const auto sched = load_schedule(a.schedule);
  const auto space = quantum::evolution_space(l.ising->problem);
  quantum::SpectrumOptions so;
  so.workers = c.workers;
  const auto sp = quantum::spectrum_vs_s(space, sched, a.levels, quantum::uniform_grid(0.0, 1.0, a.points), so);
  write_or_print(c.out, quantum::spectrum_to_csv(sp));
  std::fprintf(stderr, "%s: sector dim %zu, min gap %.6g GHz at s=%.4f, local minima %zu\n", l.id.c_str(),
               space.dim(), sp.gap_min, sp.s_at_gap_min, sp.gap_local_minima);
  if (a.anneal_ns > 0.0) {
    const std::size_t n_out = 101;
    std::vector<double> times;
    for (std::size_t i = 0; i < n_out; ++i) times.push_back(a.anneal_ns * double(i) / double(n_out - 1));
    const auto tr = quantum::schrodinger_evolve({l.ising->problem, sched}, a.anneal_ns, times);
    const auto path = c.out.empty() || c.out == "-" ? std::string("trace.csv")
                                                    : (fs::path(c.out).replace_extension("").string() + "_trace.csv");
    write_file(path, quantum::trace_to_csv(tr));
    std::fprintf(stderr, "T_QA=%g ns: final P0=%.6f, trace in %s\n", a.anneal_ns, tr.P0.back(), path.c_str());
  }
  return 0;
}

int cmd_solve(const Common& c, const SolveArgs& a) {
  if (a.algorithm == "exact") return cmd_exact(c, a);
  if (a.files.empty()) throw InputError("solve needs at least one instance file");
  if (a.runs < 1) throw InputError("--runs must be >= 1");
  std::vector<bench::BenchmarkRecord> all;
  for (const auto& f : a.files) {
    auto l = load_instance(f);
    auto recs = solve_instance(c, a, l);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  write_or_print(c.out, bench::to_jsonl(std::move(all)));
  return 0;
}

// ---- bench ----------------------------------------------------------------

int cmd_bench(const Common& c, const std::vector<std::string>& files, const std::string& quantiles,
              std::size_t n_boot) {
  if (files.empty()) throw InputError("bench needs at least one record file");
  std::vector<bench::BenchmarkRecord> recs;
  for (const auto& f : files) {
    auto part = bench::parse_jsonl(read_file(f));
    recs.insert(recs.end(), part.begin(), part.end());
  }
  if (recs.empty()) throw InputError("no records found");
  bench::SummaryOptions opt;
  opt.quantiles = parse_doubles(quantiles);
  opt.n_boot = n_boot;
  opt.seed = c.seed;
  write_or_print(c.out, bench::summary_csv(bench::summarize(recs, opt)));
  return 0;
}

// ---- npp-study ------------------------------------------------------------

struct StudyArgs {
  std::string sizes = "14,16,18,20";
  std::size_t count = 20;
  std::size_t runs = 50;
  std::string heuristics = "greedy,kk,at,brute,sa";
  std::size_t kappa = 2;
  double quantile = 0.5;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_npp_study(const Common& c, const StudyArgs& s) {
  const auto sizes = parse_sizes(s.sizes);
  const auto hs = split(s.heuristics, ',');
  auto want = [&](const char* h) { return std::find(hs.begin(), hs.end(), h) != hs.end(); };
  for (const auto& h : hs)
    if (h != "greedy" && h != "kk" && h != "at" && h != "brute" && h != "sa")
      throw InputError("unknown heuristic '" + h + "' (greedy, kk, at, brute, sa)");
  const bool need_opt = want("brute") || want("sa");
  for (auto N : sizes)
    if (need_opt && N > npp::npp_brute_force_max)
      throw InputError("brute force refused: N=" + std::to_string(N) + " exceeds the guard of " +
                       std::to_string(npp::npp_brute_force_max));
  if (c.out.empty()) throw InputError("npp-study needs --out <directory>");
  ensure_dir(c.out);

  std::string residues = "N,heuristic,median_E\n";
  std::string at_table = "N,kappa,E_AT_formula,E_AT_median,ratio\n";
  std::string sa_table = "N,n_sweeps,beta_init,beta_final,effort_updates,effort_seconds\n";
  std::vector<double> fit_n, fit_t;
  for (auto N : sizes) {
    const auto ens = npp::generate_ensemble(N, static_cast<unsigned>(N), s.count, derive_seed(c.seed, N));
    std::vector<double> g, k, at, bf;
    std::vector<npp::BigInt> targets(ens.size());
    double a2 = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const auto& inst = ens[i];
      a2 += inst.mean_square_real() / double(ens.size());
      if (want("greedy")) g.push_back(npp::greedy_partition(inst).E_real(inst.b));
      if (want("kk")) k.push_back(npp::kk_partition(inst).E_real(inst.b));
      if (want("at")) {
        npp::AtOptions o;
        o.kappa = s.kappa;
        at.push_back(npp::algorithmic_tunneling(inst, derive_seed(c.seed, {N, i}), o).partition.E_real(inst.b));
      }
      if (need_opt) {
        const auto opt = npp::npp_brute_force(inst);
        targets[i] = opt.E;
        bf.push_back(opt.E_real(inst.b));
      }
    }
    auto row = [&](const char* name, const std::vector<double>& v) {
      if (!v.empty()) residues += std::to_string(N) + "," + name + "," + fmt(median(v)) + "\n";
    };
    row("greedy", g);
    row("kk", k);
    row("at", at);
    if (want("brute")) row("brute", bf);
    if (want("at")) {
      const auto pred = npp::predict_stats(N, a2, s.kappa);
      const double m = median(at);
      at_table += std::to_string(N) + "," + std::to_string(s.kappa) + "," + fmt(pred.E_AT) + "," + fmt(m) + "," +
                  fmt(m / pred.E_AT) + "\n";
    }
    if (want("sa")) {
      const auto grid = npp::npp_sa_default_grid(N);
      const auto res = npp::npp_sa_tune(ens, targets, s.quantile, grid, s.runs, derive_seed(c.seed, {N, 7}),
                                        c.workers);
      const double secs = res.effort * constants::sa_spin_update_seconds;
      sa_table += std::to_string(N) + "," + std::to_string(res.schedule.n_sweeps) + "," +
                  fmt(res.schedule.beta_init) + "," + fmt(res.schedule.beta_final) + "," + fmt(res.effort) + "," +
                  fmt(secs) + "\n";
      fit_n.push_back(double(N));
      fit_t.push_back(secs);
    }
    std::cerr << "N=" << N << " done\n";
  }
  write_file(c.out + "/npp_residues.csv", residues);
  if (want("at")) write_file(c.out + "/npp_at.csv", at_table);
  if (want("sa")) {
    write_file(c.out + "/npp_sa.csv", sa_table);
    json fit_j;
    if (fit_n.size() >= 4) {
      const auto fit = bench::scaling_fit(fit_n, fit_t);
      fit_j = {{"alpha", fit.alpha}, {"prefactor", fit.prefactor}, {"residual", fit.residual},
               {"ci_lo", fit.ci_lo}, {"ci_hi", fit.ci_hi}, {"sizes", fit_n}, {"effort_seconds", fit_t}};
      std::fprintf(stderr, "SA alpha = %.4f [%.4f, %.4f]\n", fit.alpha, fit.ci_lo, fit.ci_hi);
    } else {
      fit_j = {{"alpha", nullptr}, {"note", "scaling fit needs at least 4 sizes"}};
    }
    write_file(c.out + "/npp_fit.json", fit_j.dump(1) + "\n");
  }
  std::cout << residues;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tunnelbench: rugged-landscape annealing benchmarks"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output path");
  };

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "write instance files");
  common(gen);
  gen->add_option("kind", g.kind, "weak-strong-pair | weak-strong-network | random-ising | npp")->required();
  gen->add_option("--count", g.count, "instances per size");
  gen->add_option("--sizes", g.sizes, "Chimera grids, e.g. 1x2,2x2,2x4");
  gen->add_option("--pattern", g.pattern, "domino pattern (columns, mirrored)");
  gen->add_option("--h1", g.h1);
  gen->add_option("--h2", g.h2);
  gen->add_option("--n", g.n, "variables (random-ising, complete)");
  gen->add_option("--topology", g.topology, "complete | chimera");
  gen->add_option("--couplings", g.couplings, "pm1 | gaussian");
  gen->add_flag("--fields", g.fields, "random fields too");
  gen->add_option("--N", g.npp_n, "NPP size");
  gen->add_option("--bits", g.bits, "NPP bit width (default N)");

  SolveArgs s;
  auto* sol = app.add_subcommand("solve", "run a solver, write JSON-lines records");
  common(sol);
  sol->add_option("algorithm", s.algorithm, "sa | qmc | exact | brute")->required();
  sol->add_option("files", s.files, "instance files")->required();
  sol->add_option("--runs", s.runs, "runs per instance");
  sol->add_option("--sweeps", s.sweeps);
  sol->add_option("--beta-init", s.beta_init, "SA start beta");
  sol->add_option("--beta-final", s.beta_final, "SA final beta");
  sol->add_flag("--geometric", s.geometric, "SA geometric beta ramp");
  sol->add_option("--beta", s.beta, "QMC beta (1/GHz)");
  sol->add_option("--trotter", s.trotter);
  sol->add_option("--schedule", s.schedule, "linear | dw2x-approx | CSV path");
  sol->add_option("--boundary", s.boundary, "periodic | open");
  sol->add_option("--readout", s.readout, "slice0 | best-replica");
  sol->add_option("--levels", s.levels, "exact: levels per point");
  sol->add_option("--points", s.points, "exact: s grid points");
  sol->add_option("--anneal-ns", s.anneal_ns, "exact: also evolve for this T_QA");

  std::vector<std::string> bench_files;
  std::string quantiles = "0.5,0.75,0.85";
  std::size_t n_boot = 1000;
  auto* ben = app.add_subcommand("bench", "TTS quantiles from records");
  common(ben);
  ben->add_option("files", bench_files, "record files")->required();
  ben->add_option("--quantiles", quantiles);
  ben->add_option("--boot", n_boot, "bootstrap resamples");

  StudyArgs st;
  auto* stu = app.add_subcommand("npp-study", "NPP heuristics and SA scaling");
  common(stu);
  stu->add_option("--sizes", st.sizes, "N values");
  stu->add_option("--count", st.count, "instances per N");
  stu->add_option("--runs", st.runs, "SA runs per instance and grid point");
  stu->add_option("--heuristics", st.heuristics, "greedy,kk,at,brute,sa");
  stu->add_option("--kappa", st.kappa, "AT group size");
  stu->add_option("--quantile", st.quantile, "tuning quantile");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) return cmd_generate(c, g);
    if (*sol) return cmd_solve(c, s);
    if (*ben) return cmd_bench(c, bench_files, quantiles, n_boot);
    if (*stu) return cmd_npp_study(c, st);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
