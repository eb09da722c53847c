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
#include <random>

#include <gtest/gtest.h>

namespace altgdmin {
namespace {

// Closed form of E[ζ² 1{|ζ| ≤ c}] for comparison.
double closed_form(double c) {
  const double phi = std::exp(-0.5 * c * c) / std::sqrt(2.0 * M_PI);
  return std::erf(c / std::sqrt(2.0)) - 2.0 * c * phi;
}

TEST(Quadrature, MatchesClosedForm) {
  for (double c : {0.0, 0.1, 0.5, 1.0, 1.7, 2.5, 3.0, 5.0, 8.0}) {
    EXPECT_NEAR(truncated_gaussian_second_moment(c), closed_form(c), 1e-13) << c;
  }
}

TEST(Quadrature, Limits) {
  EXPECT_EQ(truncated_gaussian_second_moment(0.0), 0.0);
  EXPECT_NEAR(truncated_gaussian_second_moment(100.0), 1.0, 1e-14);
  EXPECT_NEAR(truncated_gaussian_second_moment(INFINITY), 1.0, 1e-14);
}

TEST(Quadrature, MonotoneInThreshold) {
  double prev = -1.0;
  for (double c = 0.0; c < 6.0; c += 0.25) {
    const double v = truncated_gaussian_second_moment(c);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Quadrature, ShrinkageDependsOnRatio) {
  EXPECT_NEAR(truncation_shrinkage(4.0, 1.0), truncated_gaussian_second_moment(2.0), 1e-15);
  EXPECT_NEAR(truncation_shrinkage(36.0, 3.0), truncated_gaussian_second_moment(2.0), 1e-15);
  EXPECT_EQ(truncation_shrinkage(1.0, 0.0), 1.0);
}

TEST(Quadrature, ShrinkageMatchesMonteCarlo) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const double c = 1.3;
  double acc = 0.0;
  const int draws = 400000;
  for (int i = 0; i < draws; ++i) {
    const double z = g(rng);
    if (std::abs(z) <= c) acc += z * z;
  }
  EXPECT_NEAR(acc / draws, truncated_gaussian_second_moment(c), 5e-3);
}

TEST(Quadrature, PerColumn) {
  Matrix x(2, 3);
  x << 1, 0, 3, 0, 2, 4;
  const Vector beta = truncation_shrinkage(x, 9.0);
  EXPECT_NEAR(beta(0), truncated_gaussian_second_moment(3.0), 1e-15);
  EXPECT_NEAR(beta(1), truncated_gaussian_second_moment(1.5), 1e-15);
  EXPECT_NEAR(beta(2), truncated_gaussian_second_moment(0.6), 1e-15);
}

}  // namespace
}  // namespace altgdmin
