// Copyright 2026 The AltGDmin Authors.
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

#include "altgdmin/cli.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "altgdmin/bench.h"
#include "altgdmin/container.h"
#include "altgdmin/error.h"
#include "altgdmin/federation.h"
#include "altgdmin/model.h"
#include "altgdmin/solver.h"
#include "json.hpp"

namespace altgdmin {

namespace fs = std::filesystem;

namespace {

// A user-facing mistake detected before any computation.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void invalid(const std::string& msg) { throw ValidationError(msg); }

bool is_validation(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kBadRank:
    case ErrorCode::kBadKappa:
    case ErrorCode::kTooManyNodes:
    case ErrorCode::kAssignmentMismatch:
    case ErrorCode::kIo:
      return true;
    default:
      return false;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  os << text;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// Flag registration.

struct Flags {
  CLI::App* app = nullptr;
  CliConfig cfg;

  bool given(const std::string& name) const { return app->count("--" + name) > 0; }
};

void add_instance_flags(Flags& f, bool with_m) {
  auto* a = f.app;
  auto& c = f.cfg;
  a->add_option("--n", c.n, "ambient dimension n (rows of X)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  a->add_option("--q", c.q, "number of columns q")->capture_default_str()
      ->check(CLI::PositiveNumber);
  a->add_option("--r", c.r, "rank r")->capture_default_str();
  a->add_option("--kappa", c.kappa, "condition number σmax/σmin (dimensionless)")
      ->capture_default_str();
  if (with_m) {
    a->add_option("--m", c.m, "measurements per column")->capture_default_str();
  }
  a->add_option("--seed", c.seed, "master seed for every random stream")->capture_default_str();
}

void add_solver_flags(Flags& f) {
  auto* a = f.app;
  auto& c = f.cfg;
  a->add_option("--instance", c.instance,
                "instance directory from `gen` (truth.bin optional, sketches.bin required); "
                "excludes --n --q --kappa --m --seed");
  a->add_option("--t-iters", c.t_iters, "GD iterations T")->capture_default_str();
  a->add_option("--c-eta", c.c_eta, "step constant; step = c-eta / (m σ̂max²)")
      ->capture_default_str();
  a->add_option("--c-tilde", c.c_tilde, "truncation constant; 0 uses 9κ²μ² from the truth")
      ->capture_default_str();
  a->add_option("--sigma-max-mode", c.sigma_max_mode,
                "σ̂max source: oracle (true σmax) or estimate (σ1 of the init matrix / 0.92)")
      ->capture_default_str()
      ->check(CLI::IsMember({"oracle", "estimate"}));
  a->add_option("--split", c.split, "fresh measurements per phase (2T+2 phases) or one reused set")
      ->capture_default_str()
      ->check(CLI::IsMember({"on", "off"}));
  a->add_option("--stop-tol", c.stop_tol,
                "stop when SE2(U_t+1, U_t) falls below this; 0 runs all T iterations")
      ->capture_default_str();
}

void add_common_flags(Flags& f, const std::string& out_help) {
  f.app->add_option("--config", f.cfg.config,
                    "JSON object of flag values keyed by flag name without dashes; "
                    "command-line flags win");
  f.app->add_option("--out", f.cfg.out, out_help);
}

// ---------------------------------------------------------------------------
// --config merging: keys become flags placed ahead of the command line, and
// the last occurrence of a flag wins.

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.empty()) return args;
  std::string path;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) invalid("config: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("config: ") + e.what());
  }
  if (!j.is_object()) invalid("config: top level must be an object");
  std::vector<std::string> merged{args.front()};
  for (const auto& [key, value] : j.items()) {
    if (key == "config") invalid("config: key 'config' is not allowed");
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back("--" + key);
      continue;
    }
    merged.push_back("--" + key);
    merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

// ---------------------------------------------------------------------------
// Problem assembly shared by solve and federate.

struct Problem {
  std::optional<GroundTruth> truth;
  std::optional<SketchSet> sketches;
};

SolverConfig solver_config(const Flags& f) {
  const auto& c = f.cfg;
  SolverConfig cfg;
  cfg.r = c.r;
  cfg.iterations = c.t_iters;
  cfg.c_eta = c.c_eta;
  if (c.c_tilde < 0.0) invalid("c-tilde must be > 0 (or 0 for the default)");
  if (c.c_tilde > 0.0) cfg.c_tilde = c.c_tilde;
  cfg.sigma_max_mode =
      c.sigma_max_mode == "oracle" ? SigmaMaxMode::kOracle : SigmaMaxMode::kEstimateFromInit;
  cfg.split = c.split == "on";
  if (c.stop_tol < 0.0) invalid("stop-tol must be > 0 (or 0 to disable)");
  if (c.stop_tol > 0.0) cfg.stop_tol = c.stop_tol;
  return cfg;
}

void check_generation(const CliConfig& c, bool with_m) {
  if (c.r < 1) invalid("r must be ≥ 1");
  if (c.r > std::min(c.n, c.q)) invalid("r must be ≤ min(n, q)");
  if (!(c.kappa >= 1.0)) invalid("kappa must be ≥ 1");
  if (with_m && c.m < c.r) invalid("m must be ≥ r");
}

Problem load_problem(Flags& f, SolverConfig& cfg) {
  const auto& c = f.cfg;
  Problem p;
  if (!c.instance.empty()) {
    for (const char* name : {"n", "q", "kappa", "m", "seed"}) {
      if (f.given(name)) {
        invalid(fmt::format("{}: give either --instance or generation parameters, not both",
                            name));
      }
    }
    const fs::path dir(c.instance);
    if (!fs::exists(dir / "sketches.bin")) {
      invalid("instance: " + (dir / "sketches.bin").string() +
              " not found (run gen with --m)");
    }
    if (fs::exists(dir / "truth.bin")) p.truth = load_ground_truth(dir / "truth.bin");
    p.sketches = load_sketch_set(dir / "sketches.bin");
    if (!f.given("split")) cfg.split = p.sketches->split();
    if (!f.given("r") && p.truth) cfg.r = p.truth->r;
    if (p.sketches->m() < cfg.r) invalid("m must be ≥ r");
    if (cfg.r > p.sketches->n()) invalid("r must be ≤ n");
    return p;
  }
  check_generation(c, true);
  cfg.validate(c.m);
  const SeedSpec seed{c.seed};
  p.truth = generate_ground_truth(c.n, c.q, c.r, c.kappa, seed);
  const int phases = cfg.split ? 2 * cfg.iterations + 2 : 1;
  p.sketches = sketch(*p.truth, c.m, phases, cfg.split, seed);
  return p;
}

std::string run_summary_json(const std::string& subcommand, const SolverResult& res,
                             const SketchSet& sketches, const SolverConfig& cfg,
                             std::optional<double> wall_ms, const FederatedResult* fed,
                             int nodes) {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  j["n"] = sketches.n();
  j["q"] = sketches.q();
  j["r"] = cfg.r;
  j["m"] = sketches.m();
  j["split"] = cfg.split;
  j["iterations"] = static_cast<int>(res.trace.records.size()) - 1;
  j["alpha"] = res.alpha;
  j["step"] = res.step;
  if (res.trace.has_metrics) {
    const auto& last = res.trace.records.back();
    j["final_se2"] = last.se2;
    j["final_seF"] = last.se_f;
    j["final_max_rel_col_err"] = last.max_rel_col_err;
    j["final_rel_fro_err"] = last.rel_fro_err;
  } else {
    j["final_se2"] = nullptr;
  }
  if (fed != nullptr) {
    std::int64_t up = 0, down = 0;
    for (const auto& e : fed->ledger) {
      up += e.upload_scalars;
      down += e.download_scalars;
    }
    j["nodes"] = nodes;
    j["upload_scalars"] = up;
    j["download_scalars"] = down;
  }
  if (wall_ms) j["wall_ms"] = *wall_ms;
  return j.dump(2) + "\n";
}

void print_run_line(std::ostream& out, const SolverResult& res, double wall_ms) {
  const int iters = static_cast<int>(res.trace.records.size()) - 1;
  const std::string se2 =
      res.trace.has_metrics ? fmt::format("{:.3e}", res.trace.records.back().se2) : "n/a";
  out << fmt::format("final SE2 {}  iterations {}  wall {:.1f} ms\n", se2, iters, wall_ms);
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_gen(Flags& f, std::ostream& out) {
  const auto& c = f.cfg;
  if (c.out.empty()) invalid("out: gen needs an output directory");
  const bool with_m = f.given("m");
  check_generation(c, with_m);
  SolverConfig cfg = solver_config(f);
  if (with_m && cfg.split && c.t_iters < 1) invalid("t-iters must be ≥ 1");
  const fs::path dir = prepare_out(c.out);
  const SeedSpec seed{c.seed};
  const GroundTruth gt = generate_ground_truth(c.n, c.q, c.r, c.kappa, seed);
  save_ground_truth(dir / "truth.bin", gt);
  write_text(dir / "truth.json", ground_truth_summary_json(gt));
  if (with_m) {
    const int phases = cfg.split ? 2 * c.t_iters + 2 : 1;
    save_sketch_set(dir / "sketches.bin", sketch(gt, c.m, phases, cfg.split, seed));
  }
  out << fmt::format("wrote {} (n={} q={} r={} kappa={:.6g} mu={:.6g}{})\n", dir.string(), gt.n,
                     gt.q, gt.r, gt.kappa, gt.mu, with_m ? fmt::format(" m={}", c.m) : "");
  return kExitOk;
}

int cmd_solve(Flags& f, std::ostream& out, bool federated) {
  const auto& c = f.cfg;
  SolverConfig cfg = solver_config(f);
  Problem p = load_problem(f, cfg);
  std::optional<NodeAssignment> assignment;
  if (federated) {
    if (c.nodes < 1) invalid("nodes must be ≥ 1");
    if (c.nodes > p.sketches->q()) invalid("nodes must be ≤ q");
    assignment = partition_columns(
        p.sketches->q(), c.nodes,
        c.policy == "rr" ? PartitionPolicy::kRoundRobin : PartitionPolicy::kContiguous);
  }
  const GroundTruth* gt = p.truth ? &*p.truth : nullptr;

  const auto start = std::chrono::steady_clock::now();
  std::optional<FederatedResult> fed;
  if (federated) fed = run_federated_altgdmin(cfg, *p.sketches, *assignment, gt);
  const SolverResult res = fed ? fed->solver : run_altgdmin(cfg, *p.sketches, gt);
  const double wall = elapsed_ms(start);

  if (!c.out.empty()) {
    const fs::path dir = prepare_out(c.out);
    std::ostringstream trace;
    write_trace_csv(trace, res.trace, c.timing);
    write_text(dir / "trace.csv", trace.str());
    save_factor_estimate(dir / "estimate.bin", res.estimate);
    write_text(dir / "summary.json",
               run_summary_json(f.cfg.subcommand, res, *p.sketches, cfg,
                                c.timing ? std::optional<double>(wall) : std::nullopt,
                                fed ? &*fed : nullptr, c.nodes));
    if (fed) {
      std::ostringstream ledger;
      write_ledger_csv(ledger, fed->ledger);
      write_text(dir / "ledger.csv", ledger.str());
    }
  }
  print_run_line(out, res, wall);
  return kExitOk;
}

int cmd_bench(Flags& f, std::ostream& out) {
  const auto& c = f.cfg;
  if (c.grid.empty()) invalid("grid: bench needs --grid FILE");
  ExperimentGrid grid = load_grid(c.grid);
  if (!c.out.empty()) grid.output = c.out;
  if (f.given("trials")) grid.trials = c.trials;
  if (f.given("seed")) grid.seed = c.seed;
  if (f.given("eps")) grid.eps = c.eps;
  if (f.given("workers")) grid.workers = c.workers;
  if (c.timing) grid.record_timing = true;
  grid.validate();
  const auto cells = run_grid(grid);
  for (const auto& cell : cells) {
    out << fmt::format(
        "cell {:4d}  n={} q={} r={} kappa={:.6g} m={} nodes={}  success {}/{}  median SE2 "
        "{:.3e}{}\n",
        cell.cell.index, cell.cell.n, cell.cell.q, cell.cell.r, cell.cell.kappa, cell.cell.m,
        cell.cell.nodes, cell.successes, cell.trials, cell.median_final_se2,
        cell.errors > 0 ? fmt::format("  errors {}", cell.errors) : "");
  }
  return kExitOk;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
  return seeds;
}

int cmd_grad_check(Flags& f, std::ostream& out) {
  const auto& c = f.cfg;
  const int trials = c.trials > 0 ? c.trials : 3;
  check_generation(c, true);
  if (c.samples < 1) invalid("samples must be ≥ 1");
  const ProblemSize size{c.n, c.q, c.r, c.m, c.kappa};
  GradientOracleOptions opts;
  opts.samples = c.samples;
  const auto entries = gradient_oracle_suite({size}, seed_list(c.seed, trials), opts);
  const std::string report = gradient_report_json(entries);
  if (!c.out.empty()) write_text(prepare_out(c.out) / "gradient_report.json", report);
  double fd = 0.0, eg = 0.0, zr = 0.0;
  for (const auto& e : entries) {
    fd = std::max(fd, e.fd_max_rel_err);
    eg = std::max(eg, e.expected_grad_rel_err);
    zr = std::max(zr, e.zero_residual_max_abs);
  }
  out << fmt::format("fd rel err {:.3e}  expected-gradient rel err {:.3e}  zero-residual {:.3e}\n",
                     fd, eg, zr);
  return kExitOk;
}

int cmd_lemma_check(Flags& f, std::ostream& out) {
  const auto& c = f.cfg;
  const int trials = c.trials > 0 ? c.trials : 50;
  check_generation(c, true);
  if (!(c.delta > 0.0 && c.delta < 1.0)) invalid("delta must be in (0, 1)");
  if (!(c.eps1 > 0.0 && c.eps1 < 1.0)) invalid("eps1 must be in (0, 1)");
  if (c.samples < 0) invalid("samples must be ≥ 0");
  LemmaSuiteParams params{c.n, c.q, c.r, c.kappa, c.m, c.delta, c.eps1};
  const LemmaEventReport rep = lemma_event_suite(params, seed_list(c.seed, trials));
  std::optional<InitExpectationResult> init;
  if (c.samples > 0) {
    init = init_expectation_check(ProblemSize{8, 8, 2, 10, c.kappa}, SeedSpec{c.seed}, c.samples);
  }
  const std::string report = lemma_report_json(rep, init ? &*init : nullptr);
  if (!c.out.empty()) write_text(prepare_out(c.out) / "lemma_report.json", report);
  out << fmt::format(
      "column bound {:.4f}  sigma-min {:.2f}  sigma-max {:.2f}  alpha event {:.2f}  min beta "
      "{:.4f}{}\n",
      rep.ls_gap_column_freq, rep.sigma_min_slack_freq, rep.sigma_max_slack_freq, rep.alpha_event_freq,
      rep.min_beta_at_event_edge,
      init ? fmt::format("  init expectation rel err {:.3e}", init->rel_err) : "");
  return kExitOk;
}

int dispatch(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alternating GD and minimization for low-rank column-wise compressive sensing",
               "altgdmin"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Flags gen, solve, federate, bench, grad, lemma;
  gen.app = app.add_subcommand("gen", "generate a ground truth and, with --m, its sketches");
  solve.app = app.add_subcommand("solve", "run the centralized solver");
  federate.app = app.add_subcommand("federate", "run the solver as coordinator plus nodes");
  bench.app = app.add_subcommand("bench", "run a benchmark grid from a JSON file");
  grad.app = app.add_subcommand("grad-check", "gradient oracle suite");
  lemma.app = app.add_subcommand("lemma-check", "per-iteration bound and threshold suite");

  add_instance_flags(gen, true);
  add_solver_flags(gen);
  add_common_flags(gen, "output directory: truth.bin, truth.json, sketches.bin");
  gen.app->remove_option(gen.app->get_option("--instance"));

  for (Flags* f : {&solve, &federate}) {
    add_instance_flags(*f, true);
    add_solver_flags(*f);
    add_common_flags(*f, "output directory: trace.csv, estimate.bin, summary.json");
    f->app->add_flag("--timing", f->cfg.timing, "record wall time (ms) in trace and summary");
  }
  federate.app->add_option("--nodes", federate.cfg.nodes, "number of nodes N")
      ->capture_default_str();
  federate.app->add_option("--policy", federate.cfg.policy,
                           "column assignment: contig (blocks) or rr (round robin)")
      ->capture_default_str()
      ->check(CLI::IsMember({"contig", "rr"}));

  bench.app->add_option("--grid", bench.cfg.grid, "grid JSON file");
  bench.app->add_option("--trials", bench.cfg.trials, "trials per cell (overrides the grid)");
  bench.app->add_option("--seed", bench.cfg.seed, "base seed (overrides the grid)");
  bench.app->add_option("--eps", bench.cfg.eps, "success threshold on final SE2")
      ->capture_default_str();
  bench.app->add_option("--workers", bench.cfg.workers, "cells run concurrently")
      ->capture_default_str();
  bench.app->add_flag("--timing", bench.cfg.timing, "record wall time (ms) in the outputs");
  add_common_flags(bench, "output directory: cells.csv, traces/");

  grad.cfg.n = 20;
  grad.cfg.q = 10;
  grad.cfg.m = 15;
  add_instance_flags(grad, true);
  grad.app->add_option("--trials", grad.cfg.trials, "number of seeds, counting up from --seed")
      ->default_str("3");
  grad.app->add_option("--samples", grad.cfg.samples,
                       "Monte-Carlo draws for the expected gradient")
      ->capture_default_str();
  add_common_flags(grad, "output directory: gradient_report.json");

  lemma.cfg.kappa = 1.4;
  lemma.cfg.m = 200;
  add_instance_flags(lemma, true);
  lemma.app->add_option("--trials", lemma.cfg.trials, "number of seeds, counting up from --seed")
      ->default_str("50");
  lemma.app->add_option("--delta", lemma.cfg.delta, "SE2 of the perturbed basis")
      ->capture_default_str();
  lemma.app->add_option("--eps1", lemma.cfg.eps1, "relative width of the threshold event")
      ->capture_default_str();
  lemma.app->add_option("--samples", lemma.cfg.samples,
                        "Monte-Carlo draws for the init expectation check; 0 skips it")
      ->capture_default_str();
  add_common_flags(lemma, "output directory: lemma_report.json");

  std::vector<std::string> args;
  try {
    args = expand_config(raw);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  std::vector<const char*> argv{"altgdmin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (Flags* f : {&gen, &solve, &federate, &bench, &grad, &lemma}) {
      if (!f->app->parsed()) continue;
      f->cfg.subcommand = f->app->get_name();
      if (f == &gen) return cmd_gen(*f, out);
      if (f == &solve) return cmd_solve(*f, out, false);
      if (f == &federate) return cmd_solve(*f, out, true);
      if (f == &bench) return cmd_bench(*f, out);
      if (f == &grad) return cmd_grad_check(*f, out);
      return cmd_lemma_check(*f, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  return dispatch(args, out, err);
}

int parse_and_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace altgdmin
