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

#ifndef ALTGDMIN_LINALG_H_
#define ALTGDMIN_LINALG_H_

#include <Eigen/Dense>

namespace altgdmin {

// Dense real matrices are Eigen's default column-major storage.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Library-wide numerical tolerances.
inline constexpr double kOrthonormalityTol = 1e-10;  // ‖QᵀQ − I‖_max
inline constexpr double kReconstructionTol = 1e-10;  // ‖QR − M‖_F / ‖M‖_F
inline constexpr double kResidualTol = 1e-8;         // least-squares normal residual
inline constexpr double kRankTol = 1e-12;            // σ_min > kRankTol · σ_max

// An n x r matrix with orthonormal columns (r ≤ n).
class OrthonormalBasis {
 public:
  // Throws kNotOrthonormal unless ‖mᵀm − I‖_max ≤ kOrthonormalityTol.
  explicit OrthonormalBasis(Matrix m);

  const Matrix& matrix() const { return m_; }
  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }

  // ‖mᵀm − I‖_max.
  double orthonormality_error() const;

 private:
  Matrix m_;
};

struct QrResult {
  OrthonormalBasis q;
  Matrix r;  // upper triangular with non-negative diagonal
};

// Thin Householder QR with the sign convention diag(R) ≥ 0.
// Throws kRankDeficient when σ_min(m) ≤ kRankTol · σ_max(m), and
// kDimensionMismatch when m has more columns than rows.
QrResult qr_orthonormalize(const Matrix& m);

struct TopSvd {
  OrthonormalBasis u;  // top-r left singular vectors
  Vector sigma;        // top-r singular values, non-increasing
};

// Full SVD, sliced to the leading r triplets.
TopSvd top_r_svd(const Matrix& m, int r);
OrthonormalBasis top_r_left_singular_vectors(const Matrix& m, int r);

// argmin_b ‖y − a·b‖₂ through a Householder QR of a (never the normal
// equations). Throws kRankDeficient when a is numerically rank deficient.
Vector least_squares(const Matrix& a, const Vector& y);

// Spectral and Frobenius norms of (I − U₁U₁ᵀ)U₂.
double subspace_distance_2(const OrthonormalBasis& u1, const OrthonormalBasis& u2);
double subspace_distance_F(const OrthonormalBasis& u1, const OrthonormalBasis& u2);

double spectral_norm(const Matrix& m);
// Singular values in non-increasing order.
Vector singular_values(const Matrix& m);

}  // namespace altgdmin

#endif  // ALTGDMIN_LINALG_H_
