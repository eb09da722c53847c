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

#ifndef ALTGDMIN_BENCH_H_
#define ALTGDMIN_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "altgdmin/model.h"
#include "altgdmin/solver.h"

namespace altgdmin {

// ---------------------------------------------------------------------------
// Trace statistics.

// Lower edge of the measured contraction window; below it SE₂ is dominated
// by rounding.
inline constexpr double kContractionFloor = 1e-9;

// Upper edge 0.02 / (√r κ²) of the local-contraction regime.
double contraction_window_upper(int r, double kappa);

// se2[t+1]/se2[t] for every t with se2[t] inside the window.
std::vector<double> contraction_ratios(const ConvergenceTrace& trace, int r, double kappa);

// R² of the least-squares line through (t, log se2[t]) over the window;
// NaN with fewer than three points.
double log_linear_r2(const ConvergenceTrace& trace, int r, double kappa);

double median(std::vector<double> values);

// U = U⋆ cos θ + W sin θ with W ⟂ U⋆ random orthonormal and sin θ = se2, so
// every principal angle to U⋆ equals θ.
OrthonormalBasis perturb_basis(const OrthonormalBasis& u_star, double se2, SeedSpec seed);

// ---------------------------------------------------------------------------
// Grid sweeps.

struct ExperimentGrid {
  std::vector<int> n;
  std::vector<int> q;
  std::vector<int> r;
  std::vector<double> kappa;
  std::vector<int> m;
  std::vector<int> nodes{0};  // 0 = centralized, N ≥ 1 = federated (contiguous)
  int trials = 20;
  double eps = 1e-6;
  SolverConfig solver;  // r is taken from the grid
  std::uint64_t seed = 0;
  std::filesystem::path output;  // empty: no files
  bool write_traces = true;
  bool record_timing = false;
  int workers = 1;

  void validate() const;
  std::size_t cell_count() const;
};

// Keys: n, q, r, kappa, m (arrays), nodes, trials, eps, seed, output,
// write_traces, record_timing, workers, and "solver": {t_iters, c_eta,
// c_tilde, sigma_max_mode ("oracle"|"estimate"), split, stop_tol}.
ExperimentGrid parse_grid_json(const std::string& text);
ExperimentGrid load_grid(const std::filesystem::path& path);

struct CellCoordinates {
  int index = 0;
  int n = 0;
  int q = 0;
  int r = 0;
  double kappa = 1.0;
  int m = 0;
  int nodes = 0;
};

struct CellResult {
  CellCoordinates cell;
  int trials = 0;
  int successes = 0;
  double success_fraction = 0.0;
  double median_final_se2 = 0.0;
  double median_contraction = 0.0;
  double median_init_se2 = 0.0;
  double mean_wall_ms = 0.0;
  double max_wall_ms = 0.0;
  int errors = 0;
  std::string first_error;
};

// Cells enumerate n, q, r, kappa, m, nodes with the last varying fastest.
std::vector<CellCoordinates> enumerate_cells(const ExperimentGrid& grid);

// Seed of trial `trial` in cell `cell_index`.
SeedSpec trial_seed(std::uint64_t base_seed, int cell_index, int trial);

struct TrialOutcome {
  bool ok = false;
  std::string error;
  ConvergenceTrace trace;
  double wall_ms = 0.0;
};

TrialOutcome run_trial(const ExperimentGrid& grid, const CellCoordinates& cell, int trial);
CellResult summarize_cell(const ExperimentGrid& grid, const CellCoordinates& cell,
                          const std::vector<TrialOutcome>& outcomes);

void write_cells_header(std::ostream& os);
void write_cell_row(std::ostream& os, const CellResult& cell, bool include_timing);

// Runs every cell; when grid.output is set, streams cells.csv in cell order
// and writes traces/<cell>/<trial>.csv. Solver errors are recorded per trial.
std::vector<CellResult> run_grid(const ExperimentGrid& grid);

// ---------------------------------------------------------------------------
// Oracle suites.

struct ProblemSize {
  int n = 20;
  int q = 10;
  int r = 2;
  int m = 15;
  double kappa = 2.0;
};

struct GradientOracleEntry {
  ProblemSize size;
  std::uint64_t seed = 0;
  double fd_max_rel_err = 0.0;         // central differences of ½Σ‖y − AUb‖²
  double expected_grad_rel_err = 0.0;  // mean(∇/m) vs (X − X⋆)Bᵀ
  double zero_residual_max_abs = 0.0;  // ∇ at (U⋆, B⋆)
  int samples = 0;
};

struct GradientOracleOptions {
  int samples = 2000;
  int directions = 20;
  double fd_step = 1e-6;
  double perturbation = 0.3;  // SE₂ of the U used for the expectation check
};

double finite_difference_max_rel_err(const ProblemSize& size, SeedSpec seed, int directions,
                                     double fd_step);
double expected_gradient_rel_err(const ProblemSize& size, SeedSpec seed, int samples,
                                 double perturbation);
double zero_residual_gradient_max_abs(const ProblemSize& size, SeedSpec seed);

std::vector<GradientOracleEntry> gradient_oracle_suite(const std::vector<ProblemSize>& sizes,
                                                       const std::vector<std::uint64_t>& seeds,
                                                       const GradientOracleOptions& options = {});

struct LemmaSuiteParams {
  int n = 100;
  int q = 200;
  int r = 2;
  double kappa = 1.4;
  int m = 200;
  double delta = 0.01;  // SE₂(U, U⋆) of the perturbed basis
  double eps1 = 0.1;    // width of the α concentration event
};

struct LemmaEventReport {
  LemmaSuiteParams params;
  int trials = 0;
  // Fractions of column checks that hold.
  double ls_gap_column_freq = 0.0;
  double b_gap_column_freq = 0.0;  // ‖b_k − g_k‖ ≤ 0.4 δ ‖b⋆_k‖
  double b_norm_column_freq = 0.0;  // ‖b_k‖ ≤ 1.1 ‖b⋆_k‖
  double x_err_column_freq = 0.0;  // ‖x_k − x⋆_k‖ ≤ 1.4 δ ‖b⋆_k‖
  // Fractions of trials that hold, as stated and with the harness slack.
  double b_gap_fro_freq = 0.0;  // ‖B − G‖_F ≤ 0.4 √r δ σ⋆_max
  double b_gap_fro_slack_freq = 0.0;
  double x_err_fro_freq = 0.0;  // ‖X − X⋆‖_F ≤ 1.4 √r δ σ⋆_max
  double sigma_min_freq = 0.0;  // σ_min(B) ≥ 0.9 σ⋆_min
  double sigma_min_slack_freq = 0.0;
  double sigma_max_freq = 0.0;  // σ_max(B) ≤ 1.1 σ⋆_max
  double sigma_max_slack_freq = 0.0;
  // Threshold statistics.
  double alpha_event_freq = 0.0;          // realized α inside the ε₁ event
  double min_beta_at_event_edge = 0.0;    // min over trials, k of β_k(C̃(1−ε₁)‖X⋆‖²/q)
  double min_beta_realized = 0.0;         // min over trials, k of β_k(α realized)
  double beta_realized_freq = 0.0;        // trials with min_k β_k(α) ≥ 0.9
};

inline constexpr double kBGapFroSlack = 1.25;
inline constexpr double kSigmaMinSlack = 0.95;
inline constexpr double kSigmaMaxSlack = 1.05;

// One trial per seed.
LemmaEventReport lemma_event_suite(const LemmaSuiteParams& params,
                                   const std::vector<std::uint64_t>& seeds);

struct InitExpectationResult {
  double alpha = 0.0;
  double rel_err = 0.0;  // ‖mean X̂₀ − X⋆ D(α)‖_F / ‖X⋆ D(α)‖_F
  Vector beta;
};

// Averages X̂₀ over `samples` fresh init phases at a fixed α drawn from one
// alpha phase; c_tilde ≤ 0 selects 9κ²μ².
InitExpectationResult init_expectation_check(const ProblemSize& size, SeedSpec seed, int samples,
                                             double c_tilde = 0.0);

// SE₂(U₀, U⋆) of the truncated spectral init (single shared phase).
double init_subspace_error(const ProblemSize& size, SeedSpec seed);

std::string gradient_report_json(const std::vector<GradientOracleEntry>& entries);
std::string lemma_report_json(const LemmaEventReport& report,
                              const InitExpectationResult* init_check);

}  // namespace altgdmin

#endif  // ALTGDMIN_BENCH_H_
