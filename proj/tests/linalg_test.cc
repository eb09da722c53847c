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

#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "altgdmin/error.h"
#include "test_util.h"

namespace altgdmin {
namespace {

using testing::random_basis;
using testing::random_matrix;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Qr, Identity) {
  const QrResult qr = qr_orthonormalize(Matrix::Identity(3, 3));
  EXPECT_EQ(qr.q.matrix(), Matrix::Identity(3, 3));
  EXPECT_EQ(qr.r, Matrix::Identity(3, 3));
}

TEST(Qr, OrthonormalInputIsFixed) {
  const Matrix m = random_basis(12, 3, 1).matrix();
  const QrResult qr = qr_orthonormalize(m);
  EXPECT_LE(max_abs(qr.q.matrix() - m), 1e-13);
  EXPECT_LE(max_abs(qr.r - Matrix::Identity(3, 3)), 1e-13);
}

TEST(Qr, HandExample) {
  Matrix m(3, 2);
  m << 2, 0, 0, 3, 0, 0;
  const QrResult qr = qr_orthonormalize(m);
  Matrix q(3, 2);
  q << 1, 0, 0, 1, 0, 0;
  EXPECT_LE(max_abs(qr.q.matrix() - q), 1e-15);
  Matrix r(2, 2);
  r << 2, 0, 0, 3;
  EXPECT_LE(max_abs(qr.r - r), 1e-15);
}

TEST(Qr, PostconditionsOnRandomInputs) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix m = random_matrix(30, 4, s) * (s + 1.0);
    const QrResult qr = qr_orthonormalize(m);
    EXPECT_LE(qr.q.orthonormality_error(), 1e-10);
    EXPECT_LE((qr.q.matrix() * qr.r - m).norm() / m.norm(), 1e-10);
    for (int i = 0; i < 4; ++i) EXPECT_GE(qr.r(i, i), 0.0);
    EXPECT_LE(max_abs(qr.r.triangularView<Eigen::StrictlyLower>().toDenseMatrix()), 0.0);
  }
}

TEST(Qr, RankDeficientThrows) {
  Matrix m = random_matrix(10, 3, 2);
  m.col(2) = 2.0 * m.col(0) - m.col(1);
  try {
    qr_orthonormalize(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
  EXPECT_THROW(qr_orthonormalize(Matrix::Zero(4, 2)), Error);
}

TEST(Qr, WideInputThrows) {
  EXPECT_THROW(qr_orthonormalize(random_matrix(2, 3, 0)), Error);
}

TEST(OrthonormalBasis, RejectsNonOrthonormal) {
  Matrix m = Matrix::Identity(4, 2);
  m(0, 0) = 1.0 + 1e-8;
  try {
    OrthonormalBasis b(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotOrthonormal);
  }
  EXPECT_NO_THROW(OrthonormalBasis(Matrix::Identity(4, 2)));
}

TEST(TopSvd, Diagonal) {
  const Matrix d = Vector::LinSpaced(3, 3, 1).asDiagonal();
  const TopSvd svd = top_r_svd(d, 2);
  EXPECT_NEAR(svd.sigma(0), 3.0, 1e-14);
  EXPECT_NEAR(svd.sigma(1), 2.0, 1e-14);
  EXPECT_LE(subspace_distance_2(svd.u, OrthonormalBasis(Matrix::Identity(3, 2))), 1e-14);
}

TEST(TopSvd, RankOne) {
  const Vector u = random_matrix(7, 1, 3).col(0).normalized();
  const Vector v = random_matrix(5, 1, 4).col(0);
  const OrthonormalBasis top = top_r_left_singular_vectors(u * v.transpose(), 1);
  EXPECT_LE(subspace_distance_2(top, OrthonormalBasis(u)), 1e-12);
}

TEST(TopSvd, MatchesEigenOracle) {
  const Matrix m = random_matrix(20, 10, 5);
  const TopSvd svd = top_r_svd(m, 3);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m * m.transpose());
  // Eigenvalues ascend; the top three eigenvectors span the oracle subspace.
  const Matrix oracle = eig.eigenvectors().rightCols(3);
  EXPECT_LE(subspace_distance_2(svd.u, OrthonormalBasis(oracle)), 1e-8);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(svd.sigma(i), std::sqrt(eig.eigenvalues()(19 - i)), 1e-10);
  }
}

TEST(TopSvd, RankTooLarge) {
  try {
    top_r_svd(random_matrix(4, 3, 0), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankTooLarge);
  }
}

TEST(LeastSquares, Identity) {
  Vector y(3);
  y << 1, -2, 5;
  EXPECT_EQ(least_squares(Matrix::Identity(3, 3), y), y);
}

TEST(LeastSquares, OrthonormalColumnsProject) {
  const Matrix a = random_basis(9, 3, 6).matrix();
  const Vector y = random_matrix(9, 1, 7).col(0);
  EXPECT_LE(max_abs(least_squares(a, y) - a.transpose() * y), 1e-13);
}

TEST(LeastSquares, HandExample) {
  Matrix a(2, 1);
  a << 1, 1;
  Vector y(2);
  y << 1, 3;
  EXPECT_NEAR(least_squares(a, y)(0), 2.0, 1e-15);
}

TEST(LeastSquares, UnderdeterminedThrows) {
  try {
    least_squares(random_matrix(1, 2, 0), Vector::Ones(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
}

TEST(SubspaceDistance, Basics) {
  const OrthonormalBasis e1(Matrix::Identity(2, 1));
  Matrix e2m(2, 1);
  e2m << 0, 1;
  const OrthonormalBasis e2(e2m);
  EXPECT_EQ(subspace_distance_2(e1, e1), 0.0);
  EXPECT_NEAR(subspace_distance_2(e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(subspace_distance_F(e1, e2), 1.0, 1e-15);
  const double theta = 0.3;
  Matrix rot(2, 1);
  rot << std::cos(theta), std::sin(theta);
  EXPECT_NEAR(subspace_distance_2(e1, OrthonormalBasis(rot)), std::sin(theta), 1e-15);
  EXPECT_NEAR(subspace_distance_2(e1, OrthonormalBasis(rot)), 0.29552020666133955, 1e-15);
}

TEST(SubspaceDistance, FrobeniusBoundedByRootRTimesSpectral) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int r = 1 + static_cast<int>(s % 4);
    const auto u1 = random_basis(15, r, 2 * s);
    const auto u2 = random_basis(15, r, 2 * s + 1);
    const double se2 = subspace_distance_2(u1, u2);
    const double sef = subspace_distance_F(u1, u2);
    EXPECT_LE(sef, std::sqrt(static_cast<double>(r)) * se2 + 1e-12);
    EXPECT_GE(sef, se2 - 1e-12);
    EXPECT_LE(se2, 1.0 + 1e-12);
  }
}

TEST(SubspaceDistance, InvariantToRotationWithinSubspace) {
  const auto u = random_basis(10, 3, 8);
  const Matrix rot = random_basis(3, 3, 9).matrix();
  EXPECT_LE(subspace_distance_2(u, OrthonormalBasis(u.matrix() * rot)), 1e-14);
}

TEST(SubspaceDistance, DimensionMismatchThrows) {
  EXPECT_THROW(subspace_distance_2(random_basis(5, 2, 0), random_basis(6, 2, 1)), Error);
}

TEST(SingularValues, SmallAndLargePathsAgree) {
  const Matrix m = random_matrix(40, 30, 10);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.transpose() * m);
  const Vector sv = singular_values(m);
  EXPECT_NEAR(sv(0), std::sqrt(eig.eigenvalues()(29)), 1e-10);
  EXPECT_NEAR(spectral_norm(m), sv(0), 1e-12);
  EXPECT_NEAR(singular_values(m.topLeftCorner(4, 3))(0), spectral_norm(m.topLeftCorner(4, 3)),
              1e-14);
}

}  // namespace
}  // namespace altgdmin
