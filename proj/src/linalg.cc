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

#include "altgdmin/linalg.h"

#include <string>

#include "altgdmin/error.h"

namespace altgdmin {

namespace {

void check_full_rank(const Matrix& r_factor) {
  const Vector sv = singular_values(r_factor);
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  const double smallest = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  if (!(largest > 0.0) || !(smallest > kRankTol * largest)) {
    throw Error(ErrorCode::kRankDeficient,
                "numerical rank test failed (sigma_min = " + std::to_string(smallest) +
                    ", sigma_max = " + std::to_string(largest) + ")");
  }
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(Matrix m) : m_(std::move(m)) {
  if (m_.cols() < 1 || m_.cols() > m_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "orthonormal basis needs 1 <= cols <= rows");
  }
  if (!(orthonormality_error() <= kOrthonormalityTol)) {
    throw Error(ErrorCode::kNotOrthonormal,
                "columns deviate from orthonormality by " +
                    std::to_string(orthonormality_error()));
  }
}

double OrthonormalBasis::orthonormality_error() const {
  const Matrix gram = m_.transpose() * m_;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

QrResult qr_orthonormalize(const Matrix& m) {
  const auto rows = m.rows();
  const auto cols = m.cols();
  if (cols < 1 || rows < cols) {
    throw Error(ErrorCode::kDimensionMismatch, "QR needs rows >= cols >= 1");
  }
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  check_full_rank(r);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
      r.row(j) = -r.row(j);
    }
  }
  return QrResult{OrthonormalBasis(std::move(q)), std::move(r)};
}

TopSvd top_r_svd(const Matrix& m, int r) {
  if (r < 1 || r > std::min(m.rows(), m.cols())) {
    throw Error(ErrorCode::kRankTooLarge,
                "requested rank " + std::to_string(r) + " exceeds min(rows, cols)");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "SVD did not converge");
  }
  return TopSvd{OrthonormalBasis(svd.matrixU().leftCols(r)),
                svd.singularValues().head(r)};
}

OrthonormalBasis top_r_left_singular_vectors(const Matrix& m, int r) {
  return top_r_svd(m, r).u;
}

Vector least_squares(const Matrix& a, const Vector& y) {
  const auto rows = a.rows();
  const auto cols = a.cols();
  if (y.size() != rows) {
    throw Error(ErrorCode::kDimensionMismatch, "least squares: y length != rows of a");
  }
  if (cols < 1 || rows < cols) {
    throw Error(ErrorCode::kRankDeficient, "least squares needs rows >= cols >= 1");
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  check_full_rank(r);
  const Vector qty = qr.householderQ().adjoint() * y;
  return r.triangularView<Eigen::Upper>().solve(qty.head(cols));
}

double subspace_distance_2(const OrthonormalBasis& u1, const OrthonormalBasis& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "subspace distance needs equal shapes");
  }
  const Matrix residual = u2.matrix() - u1.matrix() * (u1.matrix().transpose() * u2.matrix());
  return spectral_norm(residual);
}

double subspace_distance_F(const OrthonormalBasis& u1, const OrthonormalBasis& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "subspace distance needs equal shapes");
  }
  const Matrix residual = u2.matrix() - u1.matrix() * (u1.matrix().transpose() * u2.matrix());
  return residual.norm();
}

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector();
  if (std::min(m.rows(), m.cols()) <= 16) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure, "SVD did not converge");
  }
  return svd.singularValues();
}

double spectral_norm(const Matrix& m) {
  const Vector sv = singular_values(m);
  return sv.size() > 0 ? sv(0) : 0.0;
}

}  // namespace altgdmin
