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

#include "altgdmin/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "altgdmin/error.h"

namespace altgdmin {

double measure_mu(const Matrix& b_star, double sigma_max) {
  const double q = static_cast<double>(b_star.cols());
  const double r = static_cast<double>(b_star.rows());
  const double max_sq = b_star.colwise().squaredNorm().maxCoeff();
  return std::sqrt(q * max_sq / (r * sigma_max * sigma_max));
}

GroundTruth assemble_ground_truth(OrthonormalBasis u_star, Vector sigma_star, Matrix b_star,
                                  std::uint64_t seed) {
  const int n = u_star.rows();
  const int r = u_star.cols();
  const int q = static_cast<int>(b_star.cols());
  if (sigma_star.size() != r || b_star.rows() != r) {
    throw Error(ErrorCode::kDimensionMismatch, "ground truth factor shapes disagree");
  }
  // Column by column so x⋆_k matches the U b_k products the solver forms.
  Matrix x_star(u_star.rows(), b_star.cols());
  for (Eigen::Index k = 0; k < b_star.cols(); ++k) {
    const Vector b_k = b_star.col(k);
    x_star.col(k) = u_star.matrix() * b_k;
  }
  const double kappa = sigma_star(0) / sigma_star(r - 1);
  const double mu = measure_mu(b_star, sigma_star(0));
  return GroundTruth{n,      q, r, std::move(u_star), std::move(sigma_star),
                     std::move(b_star), std::move(x_star), kappa, mu, seed};
}

GroundTruth generate_ground_truth(int n, int q, int r, double kappa_target, SeedSpec seed,
                                  double scale) {
  if (n < 1 || q < 1 || r < 1 || r > std::min(n, q)) {
    throw Error(ErrorCode::kBadRank, "need 1 <= r <= min(n, q), got r = " + std::to_string(r));
  }
  if (!std::isfinite(kappa_target) || kappa_target < 1.0) {
    throw Error(ErrorCode::kBadKappa, "kappa must be finite and >= 1");
  }
  if (r == 1 && kappa_target != 1.0) {
    throw Error(ErrorCode::kBadKappa, "a rank-1 matrix has kappa = 1");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidConfig, "spectrum scale must be positive");
  }

  Matrix gu(n, r);
  GaussianStream(seed, PhaseLabel{PhaseKind::kTruth, 0}, 0).fill(gu);
  Matrix gv(q, r);
  GaussianStream(seed, PhaseLabel{PhaseKind::kTruth, 0}, 1).fill(gv);
  OrthonormalBasis u_star = qr_orthonormalize(gu).q;
  const Matrix v_rows = qr_orthonormalize(gv).q.matrix().transpose();

  Vector sigma(r);
  for (int i = 0; i < r; ++i) {
    const double exponent = r == 1 ? 0.0 : static_cast<double>(r - 1 - i) / (r - 1);
    sigma(i) = scale * std::pow(kappa_target, exponent);
  }
  Matrix b_star = sigma.asDiagonal() * v_rows;
  return assemble_ground_truth(std::move(u_star), std::move(sigma), std::move(b_star),
                               seed.master_seed);
}

SketchSet::SketchSet(int n, int q, int m, bool split, std::vector<SketchPhase> phases)
    : n_(n), q_(q), m_(m), split_(split), phases_(std::move(phases)) {
  if (phases_.empty()) throw Error(ErrorCode::kEmptyPhase, "sketch set has no phases");
  for (const auto& phase : phases_) {
    if (phase.q() != q_ || static_cast<int>(phase.y.size()) != q_) {
      throw Error(ErrorCode::kDimensionMismatch, "phase " + phase.label.to_string() +
                                                     " does not hold q columns");
    }
    for (int k = 0; k < q_; ++k) {
      if (phase.a[k].rows() != m_ || phase.a[k].cols() != n_ || phase.y[k].size() != m_) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "phase " + phase.label.to_string() + " has a mis-shaped sketch", k);
      }
    }
  }
  if (split_) {
    const int count = static_cast<int>(phases_.size());
    if (count < 4 || count % 2 != 0) {
      throw Error(ErrorCode::kInvalidConfig, "split sketch sets need 2T+2 phases, T >= 1");
    }
    split_iterations_ = (count - 2) / 2;
  } else if (phases_.size() != 1) {
    throw Error(ErrorCode::kInvalidConfig, "non-split sketch sets hold exactly one phase");
  }
}

int SketchSet::ls_index(int t) const {
  if (!split_) return 0;
  return 1 + std::clamp(t, 1, split_iterations_);
}

int SketchSet::gd_index(int t) const {
  if (!split_) return 0;
  return 1 + split_iterations_ + std::clamp(t, 1, split_iterations_);
}

const SketchPhase& SketchSet::alpha_phase() const { return phases_[alpha_index()]; }
const SketchPhase& SketchSet::init_phase() const { return phases_[init_index()]; }
const SketchPhase& SketchSet::ls_phase(int t) const { return phases_[ls_index(t)]; }
const SketchPhase& SketchSet::gd_phase(int t) const { return phases_[gd_index(t)]; }

SketchPhase draw_phase(const Matrix& x_star, int m, PhaseLabel label, SeedSpec seed,
                       double noise_std) {
  if (m < 1) throw Error(ErrorCode::kInvalidConfig, "m must be >= 1");
  const auto n = x_star.rows();
  const int q = static_cast<int>(x_star.cols());
  SketchPhase phase;
  phase.label = label;
  phase.a.reserve(q);
  phase.y.reserve(q);
  for (int k = 0; k < q; ++k) {
    Matrix a(m, n);
    GaussianStream(seed, label, static_cast<std::uint64_t>(k)).fill(a);
    const Vector x_k = x_star.col(k);
    Vector y = a * x_k;
    if (noise_std > 0.0) {
      GaussianStream noise(seed, label, static_cast<std::uint64_t>(k), 1);
      for (int i = 0; i < m; ++i) y(i) += noise_std * noise.next();
    }
    phase.a.push_back(std::move(a));
    phase.y.push_back(std::move(y));
  }
  return phase;
}

SketchSet sketch(const GroundTruth& gt, int m, int phase_count, bool split, SeedSpec seed,
                 double noise_std) {
  std::vector<SketchPhase> phases;
  if (split) {
    if (phase_count < 4 || phase_count % 2 != 0) {
      throw Error(ErrorCode::kInvalidConfig, "split mode needs phase_count = 2T+2 with T >= 1");
    }
    const int iterations = (phase_count - 2) / 2;
    phases.push_back(draw_phase(gt.x_star, m, {PhaseKind::kAlpha, 0}, seed, noise_std));
    phases.push_back(draw_phase(gt.x_star, m, {PhaseKind::kInit, 0}, seed, noise_std));
    for (int t = 1; t <= iterations; ++t) {
      phases.push_back(draw_phase(gt.x_star, m, {PhaseKind::kLeastSquares, t}, seed, noise_std));
    }
    for (int t = 1; t <= iterations; ++t) {
      phases.push_back(draw_phase(gt.x_star, m, {PhaseKind::kGradient, t}, seed, noise_std));
    }
  } else {
    if (phase_count != 1) {
      throw Error(ErrorCode::kInvalidConfig, "non-split mode generates exactly one phase");
    }
    phases.push_back(draw_phase(gt.x_star, m, {PhaseKind::kShared, 0}, seed, noise_std));
  }
  return SketchSet(gt.n, gt.q, m, split, std::move(phases));
}

}  // namespace altgdmin
