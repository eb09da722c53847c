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

#include "altgdmin/solver.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "altgdmin/error.h"

namespace altgdmin {

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

}  // namespace

void SolverConfig::validate(int m) const {
  if (r < 1) config_error("r must be ≥ 1");
  if (iterations < 1) config_error("t-iters must be ≥ 1");
  if (!(c_eta > 0.0 && c_eta <= 0.5)) config_error("c-eta must be in (0, 0.5]");
  if (c_tilde && !(*c_tilde > 0.0 && std::isfinite(*c_tilde))) {
    config_error("c-tilde must be > 0");
  }
  if (stop_tol && !(*stop_tol > 0.0)) config_error("stop-tol must be > 0");
  if (m < r) throw Error(ErrorCode::kRankDeficient, "m must be ≥ r");
}

void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace, bool include_timing) {
  os << "iter,se2,seF,max_rel_col_err,rel_fro_err,elapsed_ms,comm_scalars\n";
  for (const auto& rec : trace.records) {
    os << rec.iter << ',';
    if (trace.has_metrics) {
      os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}", rec.se2, rec.se_f,
                        rec.max_rel_col_err, rec.rel_fro_err);
    } else {
      os << ",,,";
    }
    os << ',';
    if (include_timing) os << fmt::format("{:.3f}", rec.elapsed_ms);
    os << ',' << rec.comm_scalars << '\n';
  }
}

ExactSum alpha_partial_sum(const SketchPhase& alpha_phase, const std::vector<int>& columns) {
  ExactSum sum;
  for (int k : columns) {
    const Vector& y = alpha_phase.y.at(k);
    for (Eigen::Index i = 0; i < y.size(); ++i) sum.add(y(i) * y(i));
  }
  return sum;
}

double alpha_from_sum(const ExactSum& sum, int m, int q, double c_tilde) {
  return c_tilde * (sum.value() / (static_cast<double>(m) * static_cast<double>(q)));
}

double compute_alpha(const SketchPhase& alpha_phase, double c_tilde) {
  if (alpha_phase.q() == 0 || alpha_phase.m() == 0) {
    throw Error(ErrorCode::kEmptyPhase, "alpha phase holds no measurements");
  }
  std::vector<int> all(alpha_phase.q());
  for (int k = 0; k < alpha_phase.q(); ++k) all[k] = k;
  return alpha_from_sum(alpha_partial_sum(alpha_phase, all), alpha_phase.m(), alpha_phase.q(),
                        c_tilde);
}

Vector truncate(const Vector& y, double alpha) {
  const double threshold = std::sqrt(alpha);
  Vector out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    out(j) = std::abs(y(j)) <= threshold ? y(j) : 0.0;
  }
  return out;
}

Vector init_column(const Matrix& a, const Vector& y, double alpha) {
  return (a.transpose() * truncate(y, alpha)) / static_cast<double>(a.rows());
}

Matrix init_matrix(const SketchPhase& init_phase, double alpha) {
  if (init_phase.q() == 0) throw Error(ErrorCode::kEmptyPhase, "init phase is empty");
  Matrix x0(init_phase.n(), init_phase.q());
  for (int k = 0; k < init_phase.q(); ++k) {
    x0.col(k) = init_column(init_phase.a[k], init_phase.y[k], alpha);
  }
  return x0;
}

OrthonormalBasis spectral_init(const SketchPhase& init_phase, double alpha, int r) {
  return top_r_left_singular_vectors(init_matrix(init_phase, alpha), r);
}

Vector min_step_column(const OrthonormalBasis& u, const Matrix& a, const Vector& y, int k) {
  try {
    return least_squares(a * u.matrix(), y);
  } catch (const Error& e) {
    throw Error(e.code(), "A_k U is not full column rank", k);
  }
}

Matrix min_step(const OrthonormalBasis& u, const SketchPhase& ls_phase) {
  if (ls_phase.n() != u.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis rows differ from sketch width");
  }
  Matrix b(u.cols(), ls_phase.q());
  for (int k = 0; k < ls_phase.q(); ++k) {
    b.col(k) = min_step_column(u, ls_phase.a[k], ls_phase.y[k], k);
  }
  return b;
}

void accumulate_column_gradient(const OrthonormalBasis& u, const Vector& b_k, const Matrix& a,
                                const Vector& y, ExactSumMatrix& acc) {
  const Vector x = u.matrix() * b_k;
  const Vector residual = a * x - y;
  const Vector back = a.transpose() * residual;
  for (Eigen::Index j = 0; j < b_k.size(); ++j) {
    const double bj = b_k(j);
    for (Eigen::Index i = 0; i < back.size(); ++i) acc(i, j).add(back(i) * bj);
  }
}

Matrix round_gradient(const ExactSumMatrix& acc) {
  Matrix g(acc.rows(), acc.cols());
  for (int j = 0; j < acc.cols(); ++j) {
    for (int i = 0; i < acc.rows(); ++i) g(i, j) = acc(i, j).value();
  }
  return g;
}

Matrix gradient(const OrthonormalBasis& u, const Matrix& b, const SketchPhase& gd_phase) {
  if (b.rows() != u.cols() || b.cols() != gd_phase.q() || gd_phase.n() != u.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "gradient operands have inconsistent shapes");
  }
  ExactSumMatrix acc(u.rows(), u.cols());
  for (int k = 0; k < gd_phase.q(); ++k) {
    accumulate_column_gradient(u, b.col(k), gd_phase.a[k], gd_phase.y[k], acc);
  }
  return round_gradient(acc);
}

OrthonormalBasis gd_step(const OrthonormalBasis& u, const Matrix& grad, double step) {
  if (grad.rows() != u.rows() || grad.cols() != u.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "gradient shape differs from basis shape");
  }
  if (step == 0.0 || grad.isZero(0.0)) return u;
  return qr_orthonormalize(u.matrix() - step * grad).q;
}

TraceRecord evaluate_record(int iter, const OrthonormalBasis& u, const Matrix& b,
                            const GroundTruth* gt) {
  TraceRecord rec;
  rec.iter = iter;
  if (gt == nullptr) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.se2 = rec.se_f = rec.max_rel_col_err = rec.rel_fro_err = nan;
    return rec;
  }
  rec.se2 = subspace_distance_2(u, gt->u_star);
  rec.se_f = subspace_distance_F(u, gt->u_star);
  const Matrix x = u.matrix() * b;
  double worst = 0.0;
  for (int k = 0; k < gt->q; ++k) {
    const double truth_norm = gt->x_star.col(k).norm();
    if (truth_norm == 0.0) continue;  // zero columns are excluded
    worst = std::max(worst, (x.col(k) - gt->x_star.col(k)).norm() / truth_norm);
  }
  rec.max_rel_col_err = worst;
  rec.rel_fro_err = (x - gt->x_star).norm() / gt->x_star.norm();
  return rec;
}

double resolve_c_tilde(const SolverConfig& cfg, const GroundTruth* gt) {
  if (cfg.c_tilde) return *cfg.c_tilde;
  if (gt == nullptr) config_error("c-tilde is required when no ground truth is available");
  return 9.0 * gt->kappa * gt->kappa * gt->mu * gt->mu;
}

double resolve_sigma_max(const SolverConfig& cfg, const GroundTruth* gt, double sigma1_init) {
  if (cfg.sigma_max_mode == SigmaMaxMode::kOracle) {
    if (gt == nullptr) config_error("sigma-max-mode oracle requires ground truth");
    return gt->sigma_max();
  }
  return sigma1_init / kInitShrinkageFloor;
}

SolverResult run_altgdmin(const SolverConfig& cfg, const SketchSet& sketches,
                          const GroundTruth* gt, const IterateCallback& on_iterate) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  cfg.validate(sketches.m());
  if (cfg.split != sketches.split()) {
    config_error("split mode of the config differs from the sketch set");
  }
  if (cfg.split && sketches.split_iterations() < cfg.iterations) {
    config_error("split sketch set covers fewer iterations than t-iters");
  }
  if (gt != nullptr && (gt->n != sketches.n() || gt->q != sketches.q())) {
    throw Error(ErrorCode::kDimensionMismatch, "ground truth and sketches disagree on n, q");
  }
  const std::int64_t per_node_upload = static_cast<std::int64_t>(sketches.n()) * cfg.r;

  SolverResult result{FactorEstimate{OrthonormalBasis(Matrix::Identity(sketches.n(), cfg.r)),
                                     Matrix()},
                      ConvergenceTrace{}, 0.0, 0.0};
  result.trace.has_metrics = gt != nullptr;

  const double c_tilde = resolve_c_tilde(cfg, gt);
  result.alpha = compute_alpha(sketches.alpha_phase(), c_tilde);
  const TopSvd init = top_r_svd(init_matrix(sketches.init_phase(), result.alpha), cfg.r);
  const double sigma_hat = resolve_sigma_max(cfg, gt, init.sigma(0));
  result.step = cfg.c_eta / (static_cast<double>(sketches.m()) * sigma_hat * sigma_hat);

  OrthonormalBasis u = init.u;
  Matrix b;
  bool stopped = false;
  for (int t = 0;; ++t) {
    if (on_iterate) on_iterate(t, u);
    try {
      b = min_step(u, sketches.ls_phase(t + 1));
    } catch (const Error& e) {
      throw e.with_iteration(t);
    }
    TraceRecord rec = evaluate_record(t, u, b, gt);
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    rec.comm_scalars = t == 0 ? 0 : per_node_upload;
    result.trace.records.push_back(rec);
    if (t == cfg.iterations || stopped) break;

    try {
      const Matrix grad = gradient(u, b, sketches.gd_phase(t + 1));
      OrthonormalBasis next = gd_step(u, grad, result.step);
      if (cfg.stop_tol && subspace_distance_2(next, u) < *cfg.stop_tol) stopped = true;
      u = std::move(next);
    } catch (const Error& e) {
      throw e.with_iteration(t + 1);
    }
  }
  result.estimate = FactorEstimate{std::move(u), std::move(b)};
  return result;
}

}  // namespace altgdmin
