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

#ifndef ALTGDMIN_MODEL_H_
#define ALTGDMIN_MODEL_H_

#include <cstdint>
#include <vector>

#include "altgdmin/linalg.h"
#include "altgdmin/rng.h"

namespace altgdmin {

// Planted rank-r matrix X⋆ = U⋆ B⋆ with B⋆ = Σ⋆ V⋆.
struct GroundTruth {
  int n = 0;
  int q = 0;
  int r = 0;
  OrthonormalBasis u_star;
  Vector sigma_star;  // non-increasing, positive
  Matrix b_star;      // r x q
  Matrix x_star;      // n x q
  double kappa = 1.0;
  double mu = 0.0;  // smallest μ with ‖b⋆_k‖² ≤ μ² r σ⋆_max² / q for all k
  std::uint64_t seed = 0;

  double sigma_max() const { return sigma_star(0); }
  double sigma_min() const { return sigma_star(sigma_star.size() - 1); }
};

// U⋆ and V⋆ are Haar-distributed (Gaussian + sign-fixed QR); the spectrum
// runs geometrically from scale·κ down to scale. μ is measured, not targeted.
GroundTruth generate_ground_truth(int n, int q, int r, double kappa_target, SeedSpec seed,
                                  double scale = 1.0);

// Builds a GroundTruth around given factors (used when reading containers).
GroundTruth assemble_ground_truth(OrthonormalBasis u_star, Vector sigma_star, Matrix b_star,
                                  std::uint64_t seed);

double measure_mu(const Matrix& b_star, double sigma_max);

// One measurement set: A_k (m x n) and y_k = A_k x⋆_k for every column k.
struct SketchPhase {
  PhaseLabel label;
  std::vector<Matrix> a;
  std::vector<Vector> y;

  int q() const { return static_cast<int>(a.size()); }
  int m() const { return a.empty() ? 0 : static_cast<int>(a.front().rows()); }
  int n() const { return a.empty() ? 0 : static_cast<int>(a.front().cols()); }
};

class SketchSet {
 public:
  SketchSet(int n, int q, int m, bool split, std::vector<SketchPhase> phases);

  int n() const { return n_; }
  int q() const { return q_; }
  int m() const { return m_; }
  bool split() const { return split_; }
  // Iterations covered by distinct LS/GD phases (0 when not split).
  int split_iterations() const { return split_iterations_; }
  const std::vector<SketchPhase>& phases() const { return phases_; }

  // In non-split mode all four accessors return the single shared phase.
  // ls_phase/gd_phase clamp t to [1, split_iterations()] in split mode.
  const SketchPhase& alpha_phase() const;
  const SketchPhase& init_phase() const;
  const SketchPhase& ls_phase(int t) const;
  const SketchPhase& gd_phase(int t) const;

  // Positions of the above within phases().
  int alpha_index() const { return 0; }
  int init_index() const { return split_ ? 1 : 0; }
  int ls_index(int t) const;
  int gd_index(int t) const;

 private:
  int n_;
  int q_;
  int m_;
  bool split_;
  int split_iterations_ = 0;
  std::vector<SketchPhase> phases_;
};

// A_k has i.i.d. N(0,1) entries drawn from the (label, k) child stream.
// noise_std > 0 adds Gaussian noise to y_k from a separate stream.
SketchPhase draw_phase(const Matrix& x_star, int m, PhaseLabel label, SeedSpec seed,
                       double noise_std = 0.0);

// split: phase_count must equal 2T+2 (T ≥ 1), phases are Alpha, Init,
// LS(1..T), GD(1..T). Otherwise phase_count must be 1 (one Shared phase).
SketchSet sketch(const GroundTruth& gt, int m, int phase_count, bool split, SeedSpec seed,
                 double noise_std = 0.0);

}  // namespace altgdmin

#endif  // ALTGDMIN_MODEL_H_
