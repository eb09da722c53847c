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

#ifndef ALTGDMIN_SOLVER_H_
#define ALTGDMIN_SOLVER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "altgdmin/exact_sum.h"
#include "altgdmin/linalg.h"
#include "altgdmin/model.h"

namespace altgdmin {

enum class SigmaMaxMode {
  kOracle,            // σ̂_max = σ⋆_max from the ground truth
  kEstimateFromInit,  // σ̂_max = σ₁(X̂₀) / 0.92
};

// Lower bound on the truncation shrinkage β_k used to de-bias σ₁(X̂₀).
inline constexpr double kInitShrinkageFloor = 0.92;

struct SolverConfig {
  int r = 1;
  int iterations = 1;  // T
  // The U step is U − step·∇_U f with step = c_eta / (m σ̂_max²).
  double c_eta = 0.4;
  // Truncation constant; defaults to 9κ²μ² from the ground truth.
  std::optional<double> c_tilde;
  SigmaMaxMode sigma_max_mode = SigmaMaxMode::kOracle;
  bool split = false;
  // Stop once SE₂(U_{t+1}, U_t) < stop_tol.
  std::optional<double> stop_tol;

  // Throws kInvalidConfig naming the offending field.
  void validate(int m) const;
};

struct FactorEstimate {
  OrthonormalBasis u;  // n x r
  Matrix b;            // r x q

  Matrix x() const { return u.matrix() * b; }
};

struct TraceRecord {
  int iter = 0;
  // Ground-truth metrics; NaN when the run had no ground truth.
  double se2 = 0.0;
  double se_f = 0.0;
  double max_rel_col_err = 0.0;
  double rel_fro_err = 0.0;
  double elapsed_ms = 0.0;
  std::int64_t comm_scalars = 0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  bool has_metrics = false;
};

// Header: iter,se2,seF,max_rel_col_err,rel_fro_err,elapsed_ms,comm_scalars.
// Floats are printed with 17 significant digits. elapsed_ms is left empty
// unless include_timing is set, so that reruns produce identical bytes.
void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace, bool include_timing);

// α = c̃ · Σ_{k,i} y_ki² / (m q), summed exactly over the phase.
double compute_alpha(const SketchPhase& alpha_phase, double c_tilde);
// Σ_{k,i} y_ki² for the given columns, exactly.
ExactSum alpha_partial_sum(const SketchPhase& alpha_phase, const std::vector<int>& columns);
double alpha_from_sum(const ExactSum& sum, int m, int q, double c_tilde);

// Zeroes entries with |y_j| > √α.
Vector truncate(const Vector& y, double alpha);

// Column k of X̂₀: A_kᵀ trunc(y_k, α) / m.
Vector init_column(const Matrix& a, const Vector& y, double alpha);
// X̂₀ = (1/m) Σ_k A_kᵀ trunc(y_k, α) e_kᵀ.
Matrix init_matrix(const SketchPhase& init_phase, double alpha);
OrthonormalBasis spectral_init(const SketchPhase& init_phase, double alpha, int r);

// b_k = (A_k U)† y_k. Throws kRankDeficient with the column index.
Vector min_step_column(const OrthonormalBasis& u, const Matrix& a, const Vector& y, int k);
Matrix min_step(const OrthonormalBasis& u, const SketchPhase& ls_phase);

// Adds A_kᵀ(A_k U b_k − y_k) b_kᵀ into acc.
void accumulate_column_gradient(const OrthonormalBasis& u, const Vector& b_k, const Matrix& a,
                                const Vector& y, ExactSumMatrix& acc);
Matrix round_gradient(const ExactSumMatrix& acc);
// ∇_U f = Σ_k A_kᵀ(A_k U b_k − y_k) b_kᵀ, summed exactly over ascending k.
Matrix gradient(const OrthonormalBasis& u, const Matrix& b, const SketchPhase& gd_phase);

// QR(U − step·grad). Returns U unchanged when step·grad is identically zero.
OrthonormalBasis gd_step(const OrthonormalBasis& u, const Matrix& grad, double step);

// Metrics of record `iter` for estimate (u, b) against gt.
TraceRecord evaluate_record(int iter, const OrthonormalBasis& u, const Matrix& b,
                            const GroundTruth* gt);

// c̃ resolved from cfg or from 9κ²μ² of the ground truth.
double resolve_c_tilde(const SolverConfig& cfg, const GroundTruth* gt);
// σ̂_max per cfg.sigma_max_mode; sigma1_init is σ₁(X̂₀).
double resolve_sigma_max(const SolverConfig& cfg, const GroundTruth* gt, double sigma1_init);

struct SolverResult {
  FactorEstimate estimate;
  ConvergenceTrace trace;
  double alpha = 0.0;
  double step = 0.0;
};

// Called with (t, U_t) for every iterate, including U_0.
using IterateCallback = std::function<void(int, const OrthonormalBasis&)>;

// Truncated spectral init, then T rounds of min-B / projected-GD-U.
// Metrics are recorded only when gt is non-null.
SolverResult run_altgdmin(const SolverConfig& cfg, const SketchSet& sketches,
                          const GroundTruth* gt = nullptr, const IterateCallback& on_iterate = {});

}  // namespace altgdmin

#endif  // ALTGDMIN_SOLVER_H_
