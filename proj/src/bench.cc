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

#include "altgdmin/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "altgdmin/error.h"
#include "altgdmin/federation.h"
#include "altgdmin/quadrature.h"
#include "json.hpp"

namespace altgdmin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream index reserved for the perturbation direction of perturb_basis.
constexpr int kPerturbationStream = 1'000'000;

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Window membership for the contraction statistics.
bool in_window(double se2, double upper) { return se2 >= kContractionFloor && se2 <= upper; }

}  // namespace

double contraction_window_upper(int r, double kappa) {
  return 0.02 / (std::sqrt(static_cast<double>(r)) * kappa * kappa);
}

std::vector<double> contraction_ratios(const ConvergenceTrace& trace, int r, double kappa) {
  std::vector<double> ratios;
  const double upper = contraction_window_upper(r, kappa);
  for (size_t t = 0; t + 1 < trace.records.size(); ++t) {
    const double now = trace.records[t].se2;
    if (in_window(now, upper)) ratios.push_back(trace.records[t + 1].se2 / now);
  }
  return ratios;
}

double log_linear_r2(const ConvergenceTrace& trace, int r, double kappa) {
  const double upper = contraction_window_upper(r, kappa);
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& rec : trace.records) {
    if (in_window(rec.se2, upper)) {
      xs.push_back(rec.iter);
      ys.push_back(std::log(rec.se2));
    }
  }
  if (xs.size() < 3) return kNaN;
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (syy == 0.0) return 1.0;
  return (sxy * sxy) / (sxx * syy);
}

double median(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

OrthonormalBasis perturb_basis(const OrthonormalBasis& u_star, double se2, SeedSpec seed) {
  const int n = u_star.rows();
  const int r = u_star.cols();
  if (n < 2 * r) throw Error(ErrorCode::kDimensionMismatch, "perturb_basis needs n >= 2r");
  if (!(se2 >= 0.0 && se2 <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "subspace distance must lie in [0, 1]");
  }
  const Matrix& us = u_star.matrix();
  Matrix w(n, r);
  GaussianStream(seed, PhaseLabel{PhaseKind::kFresh, kPerturbationStream}, 0).fill(w);
  for (int pass = 0; pass < 2; ++pass) w -= us * (us.transpose() * w);
  const Matrix w_basis = qr_orthonormalize(w).q.matrix();
  const double theta = std::asin(se2);
  return OrthonormalBasis(std::cos(theta) * us + std::sin(theta) * w_basis);
}

// ---------------------------------------------------------------------------

void ExperimentGrid::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, "grid field '" + field + "' " + why);
  };
  if (n.empty()) fail("n", "must be a non-empty list");
  if (q.empty()) fail("q", "must be a non-empty list");
  if (r.empty()) fail("r", "must be a non-empty list");
  if (kappa.empty()) fail("kappa", "must be a non-empty list");
  if (m.empty()) fail("m", "must be a non-empty list");
  if (nodes.empty()) fail("nodes", "must be a non-empty list");
  if (trials < 1) fail("trials", "must be >= 1");
  if (!(eps > 0.0)) fail("eps", "must be > 0");
  if (workers < 1) fail("workers", "must be >= 1");
  for (int v : nodes) {
    if (v < 0) fail("nodes", "entries must be >= 0");
  }
}

std::size_t ExperimentGrid::cell_count() const {
  return n.size() * q.size() * r.size() * kappa.size() * m.size() * nodes.size();
}

ExperimentGrid parse_grid_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("grid JSON: ") + e.what());
  }
  ExperimentGrid g;
  try {
    auto int_list = [&](const char* key, std::vector<int>& out) {
      if (!j.contains(key)) return;
      out = j.at(key).is_array() ? j.at(key).get<std::vector<int>>()
                                 : std::vector<int>{j.at(key).get<int>()};
    };
    int_list("n", g.n);
    int_list("q", g.q);
    int_list("r", g.r);
    int_list("m", g.m);
    int_list("nodes", g.nodes);
    if (j.contains("kappa")) {
      g.kappa = j["kappa"].is_array() ? j["kappa"].get<std::vector<double>>()
                                      : std::vector<double>{j["kappa"].get<double>()};
    }
    if (j.contains("trials")) g.trials = j["trials"].get<int>();
    if (j.contains("eps")) g.eps = j["eps"].get<double>();
    if (j.contains("seed")) g.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output")) g.output = j["output"].get<std::string>();
    if (j.contains("write_traces")) g.write_traces = j["write_traces"].get<bool>();
    if (j.contains("record_timing")) g.record_timing = j["record_timing"].get<bool>();
    if (j.contains("workers")) g.workers = j["workers"].get<int>();
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      if (s.contains("t_iters")) g.solver.iterations = s["t_iters"].get<int>();
      if (s.contains("c_eta")) g.solver.c_eta = s["c_eta"].get<double>();
      if (s.contains("c_tilde") && !s["c_tilde"].is_null()) {
        g.solver.c_tilde = s["c_tilde"].get<double>();
      }
      if (s.contains("sigma_max_mode")) {
        const auto mode = s["sigma_max_mode"].get<std::string>();
        if (mode == "oracle") {
          g.solver.sigma_max_mode = SigmaMaxMode::kOracle;
        } else if (mode == "estimate") {
          g.solver.sigma_max_mode = SigmaMaxMode::kEstimateFromInit;
        } else {
          throw Error(ErrorCode::kInvalidConfig, "grid field 'solver.sigma_max_mode' must be "
                                                 "oracle or estimate");
        }
      }
      if (s.contains("split")) g.solver.split = s["split"].get<bool>();
      if (s.contains("stop_tol") && !s["stop_tol"].is_null()) {
        g.solver.stop_tol = s["stop_tol"].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("grid JSON: ") + e.what());
  }
  g.validate();
  return g;
}

ExperimentGrid load_grid(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open grid file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_grid_json(ss.str());
}

std::vector<CellCoordinates> enumerate_cells(const ExperimentGrid& grid) {
  std::vector<CellCoordinates> cells;
  int index = 0;
  for (int n : grid.n)
    for (int q : grid.q)
      for (int r : grid.r)
        for (double kappa : grid.kappa)
          for (int m : grid.m)
            for (int nodes : grid.nodes) cells.push_back({index++, n, q, r, kappa, m, nodes});
  return cells;
}

SeedSpec trial_seed(std::uint64_t base_seed, int cell_index, int trial) {
  return SeedSpec{derive_stream_seed(SeedSpec{base_seed}, PhaseLabel{PhaseKind::kFresh, cell_index},
                                     static_cast<std::uint64_t>(trial), 0x747269616cull)};
}

TrialOutcome run_trial(const ExperimentGrid& grid, const CellCoordinates& cell, int trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialOutcome out;
  SolverConfig cfg = grid.solver;
  cfg.r = cell.r;
  const SeedSpec seed = trial_seed(grid.seed, cell.index, trial);
  try {
    const GroundTruth gt = generate_ground_truth(cell.n, cell.q, cell.r, cell.kappa, seed);
    const int phase_count = cfg.split ? 2 * cfg.iterations + 2 : 1;
    const SketchSet sketches = sketch(gt, cell.m, phase_count, cfg.split, seed);
    if (cell.nodes == 0) {
      out.trace = run_altgdmin(cfg, sketches, &gt).trace;
    } else {
      const NodeAssignment assignment =
          partition_columns(cell.q, cell.nodes, PartitionPolicy::kContiguous);
      out.trace = run_federated_altgdmin(cfg, sketches, assignment, &gt).solver.trace;
    }
    out.ok = true;
  } catch (const Error& e) {
    out.error = e.what();
  }
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CellResult summarize_cell(const ExperimentGrid& grid, const CellCoordinates& cell,
                          const std::vector<TrialOutcome>& outcomes) {
  CellResult res;
  res.cell = cell;
  res.trials = static_cast<int>(outcomes.size());
  std::vector<double> finals, inits, contractions;
  double wall_sum = 0.0;
  for (const auto& o : outcomes) {
    wall_sum += o.wall_ms;
    res.max_wall_ms = std::max(res.max_wall_ms, o.wall_ms);
    if (!o.ok) {
      if (res.errors++ == 0) res.first_error = o.error;
      continue;
    }
    const double final_se2 = o.trace.records.back().se2;
    if (final_se2 <= grid.eps) ++res.successes;
    finals.push_back(final_se2);
    inits.push_back(o.trace.records.front().se2);
    const auto ratios = contraction_ratios(o.trace, cell.r, cell.kappa);
    if (!ratios.empty()) contractions.push_back(median(ratios));
  }
  res.success_fraction = res.trials > 0 ? static_cast<double>(res.successes) / res.trials : 0.0;
  res.median_final_se2 = median(finals);
  res.median_init_se2 = median(inits);
  res.median_contraction = median(contractions);
  res.mean_wall_ms = res.trials > 0 ? wall_sum / res.trials : 0.0;
  return res;
}

void write_cells_header(std::ostream& os) {
  os << "cell,n,q,r,kappa,m,nodes,trials,successes,success_fraction,median_final_se2,"
        "median_contraction,median_init_se2,mean_wall_ms,max_wall_ms,errors,first_error\n";
}

void write_cell_row(std::ostream& os, const CellResult& c, bool include_timing) {
  os << c.cell.index << ',' << c.cell.n << ',' << c.cell.q << ',' << c.cell.r << ','
     << fmt_double(c.cell.kappa) << ',' << c.cell.m << ',' << c.cell.nodes << ',' << c.trials
     << ',' << c.successes << ',' << fmt_double(c.success_fraction) << ','
     << fmt_double(c.median_final_se2) << ',' << fmt_double(c.median_contraction) << ','
     << fmt_double(c.median_init_se2) << ',';
  if (include_timing) os << fmt::format("{:.3f},{:.3f}", c.mean_wall_ms, c.max_wall_ms);
  else os << ',';
  os << ',' << c.errors << ',' << (c.first_error.empty() ? "" : csv_quote(c.first_error)) << '\n';
}

std::vector<CellResult> run_grid(const ExperimentGrid& grid) {
  grid.validate();
  const auto cells = enumerate_cells(grid);
  const bool to_disk = !grid.output.empty();
  std::ofstream csv;
  if (to_disk) {
    std::filesystem::create_directories(grid.output);
    csv.open(grid.output / "cells.csv", std::ios::trunc);
    if (!csv) throw Error(ErrorCode::kIo, "cannot write " + (grid.output / "cells.csv").string());
    write_cells_header(csv);
    csv.flush();
  }

  auto run_cell = [&](const CellCoordinates& cell) {
    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(grid.trials);
    for (int trial = 0; trial < grid.trials; ++trial) {
      outcomes.push_back(run_trial(grid, cell, trial));
      if (to_disk && grid.write_traces && outcomes.back().ok) {
        const auto dir = grid.output / "traces" / fmt::format("{:04d}", cell.index);
        std::filesystem::create_directories(dir);
        std::ofstream os(dir / fmt::format("{:04d}.csv", trial), std::ios::trunc);
        write_trace_csv(os, outcomes.back().trace, grid.record_timing);
      }
    }
    return summarize_cell(grid, cell, outcomes);
  };

  std::vector<CellResult> results(cells.size());
  std::vector<bool> done(cells.size(), false);
  std::size_t flushed = 0;
  std::mutex mu;
  auto publish = [&](std::size_t i, CellResult res) {
    std::lock_guard<std::mutex> lock(mu);
    results[i] = std::move(res);
    done[i] = true;
    while (flushed < cells.size() && done[flushed]) {
      if (to_disk) {
        write_cell_row(csv, results[flushed], grid.record_timing);
        csv.flush();
      }
      ++flushed;
    }
  };

  const int workers = std::min<int>(grid.workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) publish(i, run_cell(cells[i]));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) publish(i, run_cell(cells[i]));
      });
    }
    for (auto& t : pool) t.join();
  }
  return results;
}

// ---------------------------------------------------------------------------

namespace {

GroundTruth suite_truth(const ProblemSize& size, SeedSpec seed) {
  return generate_ground_truth(size.n, size.q, size.r, size.kappa, seed);
}

// ½ Σ_k ‖y_k − A_k U b_k‖², evaluated directly.
double half_objective(const Matrix& u, const Matrix& b, const SketchPhase& phase) {
  double total = 0.0;
  for (int k = 0; k < phase.q(); ++k) {
    total += 0.5 * (phase.y[k] - phase.a[k] * (u * b.col(k))).squaredNorm();
  }
  return total;
}

}  // namespace

double finite_difference_max_rel_err(const ProblemSize& size, SeedSpec seed, int directions,
                                     double fd_step) {
  const GroundTruth gt = suite_truth(size, seed);
  const SketchPhase phase = draw_phase(gt.x_star, size.m, {PhaseKind::kFresh, 0}, seed);
  Matrix g(size.n, size.r);
  GaussianStream(seed, {PhaseKind::kFresh, 1}, 0).fill(g);
  const OrthonormalBasis u = qr_orthonormalize(g).q;
  Matrix b(size.r, size.q);
  GaussianStream(seed, {PhaseKind::kFresh, 1}, 1).fill(b);
  const Matrix grad = gradient(u, b, phase);

  double worst = 0.0;
  for (int d = 0; d < directions; ++d) {
    Matrix delta(size.n, size.r);
    GaussianStream(seed, {PhaseKind::kFresh, 2}, static_cast<std::uint64_t>(d)).fill(delta);
    const double fd = (half_objective(u.matrix() + fd_step * delta, b, phase) -
                       half_objective(u.matrix() - fd_step * delta, b, phase)) /
                      (2.0 * fd_step);
    const double analytic = grad.cwiseProduct(delta).sum();
    const double scale =
        std::max(std::abs(analytic), 1e-12 * grad.norm() * delta.norm());
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  return worst;
}

double expected_gradient_rel_err(const ProblemSize& size, SeedSpec seed, int samples,
                                 double perturbation) {
  const GroundTruth gt = suite_truth(size, seed);
  const OrthonormalBasis u = perturb_basis(gt.u_star, perturbation, seed);
  const Matrix b = min_step(u, draw_phase(gt.x_star, size.m, {PhaseKind::kFresh, 0}, seed));
  Matrix mean = Matrix::Zero(size.n, size.r);
  for (int s = 1; s <= samples; ++s) {
    const SketchPhase phase = draw_phase(gt.x_star, size.m, {PhaseKind::kFresh, s}, seed);
    mean += gradient(u, b, phase) / static_cast<double>(size.m);
  }
  mean /= static_cast<double>(samples);
  const Matrix target = (u.matrix() * b - gt.x_star) * b.transpose();
  return (mean - target).norm() / target.norm();
}

double zero_residual_gradient_max_abs(const ProblemSize& size, SeedSpec seed) {
  const GroundTruth gt = suite_truth(size, seed);
  const SketchPhase phase = draw_phase(gt.x_star, size.m, {PhaseKind::kFresh, 0}, seed);
  return gradient(gt.u_star, gt.b_star, phase).cwiseAbs().maxCoeff();
}

std::vector<GradientOracleEntry> gradient_oracle_suite(const std::vector<ProblemSize>& sizes,
                                                       const std::vector<std::uint64_t>& seeds,
                                                       const GradientOracleOptions& options) {
  std::vector<GradientOracleEntry> out;
  for (const auto& size : sizes) {
    for (std::uint64_t s : seeds) {
      GradientOracleEntry e;
      e.size = size;
      e.seed = s;
      e.samples = options.samples;
      e.fd_max_rel_err =
          finite_difference_max_rel_err(size, SeedSpec{s}, options.directions, options.fd_step);
      e.expected_grad_rel_err =
          expected_gradient_rel_err(size, SeedSpec{s}, options.samples, options.perturbation);
      e.zero_residual_max_abs = zero_residual_gradient_max_abs(size, SeedSpec{s});
      out.push_back(e);
    }
  }
  return out;
}

LemmaEventReport lemma_event_suite(const LemmaSuiteParams& p,
                                   const std::vector<std::uint64_t>& seeds) {
  LemmaEventReport rep;
  rep.params = p;
  rep.trials = static_cast<int>(seeds.size());
  if (seeds.empty()) return rep;
  const double sqrt_r = std::sqrt(static_cast<double>(p.r));
  long columns = 0, ls_gap = 0, b_gap = 0, b_norm = 0, x_err = 0;
  int b_gap_fro = 0, b_gap_fro_s = 0, x_err_fro = 0, smin_ok = 0, smin_s = 0, smax_ok = 0, smax_s = 0;
  int alpha_in = 0, beta_ok = 0;
  rep.min_beta_at_event_edge = std::numeric_limits<double>::infinity();
  rep.min_beta_realized = std::numeric_limits<double>::infinity();

  for (std::uint64_t s : seeds) {
    const SeedSpec seed{s};
    const GroundTruth gt = generate_ground_truth(p.n, p.q, p.r, p.kappa, seed);
    const OrthonormalBasis u = perturb_basis(gt.u_star, p.delta, seed);
    const SketchPhase ls = draw_phase(gt.x_star, p.m, {PhaseKind::kFresh, 0}, seed);
    const Matrix b = min_step(u, ls);
    const Matrix& um = u.matrix();
    const Matrix g = um.transpose() * gt.x_star;
    const Matrix x = um * b;
    for (int k = 0; k < p.q; ++k) {
      const Vector& xs = gt.x_star.col(k);
      const double bstar_norm = gt.b_star.col(k).norm();
      const double gap = (b.col(k) - g.col(k)).norm();
      const double outside = (xs - um * (um.transpose() * xs)).norm();
      ++columns;
      ls_gap += gap <= 0.4 * outside;
      b_gap += gap <= 0.4 * p.delta * bstar_norm;
      b_norm += b.col(k).norm() <= 1.1 * bstar_norm;
      x_err += (x.col(k) - xs).norm() <= 1.4 * p.delta * bstar_norm;
    }
    const double bg = (b - g).norm();
    const double fro_bound = 0.4 * sqrt_r * p.delta * gt.sigma_max();
    b_gap_fro += bg <= fro_bound;
    b_gap_fro_s += bg <= fro_bound * kBGapFroSlack;
    x_err_fro += (x - gt.x_star).norm() <= 1.4 * sqrt_r * p.delta * gt.sigma_max();
    const Vector sv = singular_values(b);
    const double smin = sv(p.r - 1);
    const double smax = sv(0);
    smin_ok += smin >= 0.9 * gt.sigma_min();
    smin_s += smin >= 0.9 * kSigmaMinSlack * gt.sigma_min();
    smax_ok += smax <= 1.1 * gt.sigma_max();
    smax_s += smax <= 1.1 * kSigmaMaxSlack * gt.sigma_max();

    const double c_tilde = 9.0 * gt.kappa * gt.kappa * gt.mu * gt.mu;
    const double energy = gt.x_star.squaredNorm() / p.q;
    const double alpha = compute_alpha(draw_phase(gt.x_star, p.m, {PhaseKind::kAlpha, 0}, seed),
                                       c_tilde);
    alpha_in += alpha >= c_tilde * (1.0 - p.eps1) * energy &&
                alpha <= c_tilde * (1.0 + p.eps1) * energy;
    const double edge_beta =
        truncation_shrinkage(gt.x_star, c_tilde * (1.0 - p.eps1) * energy).minCoeff();
    const double realized_beta = truncation_shrinkage(gt.x_star, alpha).minCoeff();
    rep.min_beta_at_event_edge = std::min(rep.min_beta_at_event_edge, edge_beta);
    rep.min_beta_realized = std::min(rep.min_beta_realized, realized_beta);
    beta_ok += realized_beta >= 0.9;
  }
  const double cols = static_cast<double>(columns);
  const double trials = static_cast<double>(rep.trials);
  rep.ls_gap_column_freq = ls_gap / cols;
  rep.b_gap_column_freq = b_gap / cols;
  rep.b_norm_column_freq = b_norm / cols;
  rep.x_err_column_freq = x_err / cols;
  rep.b_gap_fro_freq = b_gap_fro / trials;
  rep.b_gap_fro_slack_freq = b_gap_fro_s / trials;
  rep.x_err_fro_freq = x_err_fro / trials;
  rep.sigma_min_freq = smin_ok / trials;
  rep.sigma_min_slack_freq = smin_s / trials;
  rep.sigma_max_freq = smax_ok / trials;
  rep.sigma_max_slack_freq = smax_s / trials;
  rep.alpha_event_freq = alpha_in / trials;
  rep.beta_realized_freq = beta_ok / trials;
  return rep;
}

InitExpectationResult init_expectation_check(const ProblemSize& size, SeedSpec seed, int samples,
                                             double c_tilde) {
  const GroundTruth gt = suite_truth(size, seed);
  if (c_tilde <= 0.0) c_tilde = 9.0 * gt.kappa * gt.kappa * gt.mu * gt.mu;
  InitExpectationResult res;
  res.alpha = compute_alpha(draw_phase(gt.x_star, size.m, {PhaseKind::kAlpha, 0}, seed), c_tilde);
  Matrix mean = Matrix::Zero(size.n, size.q);
  for (int s = 1; s <= samples; ++s) {
    mean += init_matrix(draw_phase(gt.x_star, size.m, {PhaseKind::kFresh, s}, seed), res.alpha);
  }
  mean /= static_cast<double>(samples);
  res.beta = truncation_shrinkage(gt.x_star, res.alpha);
  const Matrix target = gt.x_star * res.beta.asDiagonal();
  res.rel_err = (mean - target).norm() / target.norm();
  return res;
}

double init_subspace_error(const ProblemSize& size, SeedSpec seed) {
  const GroundTruth gt = suite_truth(size, seed);
  const SketchPhase phase = draw_phase(gt.x_star, size.m, {PhaseKind::kShared, 0}, seed);
  const double c_tilde = 9.0 * gt.kappa * gt.kappa * gt.mu * gt.mu;
  const double alpha = compute_alpha(phase, c_tilde);
  return subspace_distance_2(spectral_init(phase, alpha, size.r), gt.u_star);
}

std::string gradient_report_json(const std::vector<GradientOracleEntry>& entries) {
  nlohmann::ordered_json j;
  j["suite"] = "gradient";
  j["entries"] = nlohmann::ordered_json::array();
  double fd = 0.0, eg = 0.0, zr = 0.0;
  for (const auto& e : entries) {
    nlohmann::ordered_json row;
    row["n"] = e.size.n;
    row["q"] = e.size.q;
    row["r"] = e.size.r;
    row["m"] = e.size.m;
    row["kappa"] = e.size.kappa;
    row["seed"] = e.seed;
    row["samples"] = e.samples;
    row["fd_max_rel_err"] = e.fd_max_rel_err;
    row["expected_grad_rel_err"] = e.expected_grad_rel_err;
    row["zero_residual_max_abs"] = e.zero_residual_max_abs;
    j["entries"].push_back(row);
    fd = std::max(fd, e.fd_max_rel_err);
    eg = std::max(eg, e.expected_grad_rel_err);
    zr = std::max(zr, e.zero_residual_max_abs);
  }
  j["max_fd_rel_err"] = fd;
  j["max_expected_grad_rel_err"] = eg;
  j["max_zero_residual_abs"] = zr;
  return j.dump(2) + "\n";
}

std::string lemma_report_json(const LemmaEventReport& r, const InitExpectationResult* init) {
  nlohmann::ordered_json j;
  j["suite"] = "lemma";
  j["params"] = {{"n", r.params.n},         {"q", r.params.q},     {"r", r.params.r},
                 {"kappa", r.params.kappa}, {"m", r.params.m},     {"delta", r.params.delta},
                 {"eps1", r.params.eps1},   {"trials", r.trials}};
  j["ls_gap_column_freq"] = r.ls_gap_column_freq;
  j["b_gap_column_freq"] = r.b_gap_column_freq;
  j["b_norm_column_freq"] = r.b_norm_column_freq;
  j["b_gap_fro_freq"] = r.b_gap_fro_freq;
  j["b_gap_fro_slack_freq"] = r.b_gap_fro_slack_freq;
  j["x_err_column_freq"] = r.x_err_column_freq;
  j["x_err_fro_freq"] = r.x_err_fro_freq;
  j["sigma_min_freq"] = r.sigma_min_freq;
  j["sigma_min_slack_freq"] = r.sigma_min_slack_freq;
  j["sigma_max_freq"] = r.sigma_max_freq;
  j["sigma_max_slack_freq"] = r.sigma_max_slack_freq;
  j["alpha_event_freq"] = r.alpha_event_freq;
  j["min_beta_at_event_edge"] = r.min_beta_at_event_edge;
  j["min_beta_realized"] = r.min_beta_realized;
  j["beta_realized_freq"] = r.beta_realized_freq;
  if (init != nullptr) {
    j["init_expectation"] = {{"alpha", init->alpha},
                             {"rel_err", init->rel_err},
                             {"min_beta", init->beta.size() ? init->beta.minCoeff() : 0.0}};
  }
  return j.dump(2) + "\n";
}

}  // namespace altgdmin
