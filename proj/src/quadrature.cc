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

#include "altgdmin/quadrature.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace altgdmin {

namespace {

// Beyond this the neglected tail mass is below 1e-300.
constexpr double kTailCut = 40.0;

}  // namespace

double truncated_gaussian_second_moment(double c) {
  if (std::isnan(c) || c <= 0.0) return 0.0;
  const double upper = std::min(c, kTailCut);
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrand = [inv_sqrt_2pi](double z) { return z * z * std::exp(-0.5 * z * z) * inv_sqrt_2pi; };
  const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 15, 1e-14);
  return 2.0 * half;
}

double truncation_shrinkage(double alpha, double column_norm) {
  if (alpha < 0.0) return 0.0;
  if (column_norm == 0.0) return 1.0;
  return truncated_gaussian_second_moment(std::sqrt(alpha) / column_norm);
}

Vector truncation_shrinkage(const Matrix& x_star, double alpha) {
  Vector beta(x_star.cols());
  for (Eigen::Index k = 0; k < x_star.cols(); ++k) {
    beta(k) = truncation_shrinkage(alpha, x_star.col(k).norm());
  }
  return beta;
}

}  // namespace altgdmin
