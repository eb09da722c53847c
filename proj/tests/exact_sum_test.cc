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

#include "altgdmin/exact_sum.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace altgdmin {
namespace {

double exact(const std::vector<double>& xs) {
  ExactSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

TEST(ExactSum, EmptyIsZero) {
  ExactSum s;
  EXPECT_TRUE(s.is_zero());
  EXPECT_EQ(s.value(), 0.0);
}

TEST(ExactSum, CancellationIsExact) {
  EXPECT_EQ(exact({1e100, 1.0, -1e100}), 1.0);
  // The three decimal literals leave a residue of exactly 2^-55.
  EXPECT_EQ(exact({0.1, 0.2, -0.3}), std::ldexp(1.0, -55));
  ExactSum s;
  s.add(3.5);
  s.add(-3.5);
  EXPECT_TRUE(s.is_zero());
}

TEST(ExactSum, MatchesLongDoubleOnBenignInput) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(1000);
  long double ref = 0.0L;
  for (double& x : xs) {
    x = u(rng);
    ref += x;
  }
  EXPECT_NEAR(exact(xs), static_cast<double>(ref), 1e-12);
}

TEST(ExactSum, OrderIndependent) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<double> xs(500);
  for (size_t i = 0; i < xs.size(); ++i) {
    xs[i] = g(rng) * std::ldexp(1.0, static_cast<int>(i % 60) - 30);
  }
  const double first = exact(xs);
  for (int rep = 0; rep < 20; ++rep) {
    std::shuffle(xs.begin(), xs.end(), rng);
    EXPECT_EQ(exact(xs), first);
  }
}

TEST(ExactSum, MergeEqualsSingleAccumulator) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> xs(300);
  for (double& x : xs) x = g(rng) * 1e5;
  ExactSum a, b, all;
  for (size_t i = 0; i < xs.size(); ++i) {
    (i % 3 == 0 ? a : b).add(xs[i]);
    all.add(xs[i]);
  }
  a.merge(b);
  EXPECT_EQ(a.value(), all.value());
}

TEST(ExactSum, RoundsTiesToEven) {
  // 1 + 2^-53 is a tie between 1 and 1 + 2^-52; even mantissa wins.
  EXPECT_EQ(exact({1.0, std::ldexp(1.0, -53)}), 1.0);
  const double odd = 1.0 + std::ldexp(1.0, -52);
  EXPECT_EQ(exact({odd, std::ldexp(1.0, -53)}), 1.0 + std::ldexp(1.0, -51));
  // A tiny extra term breaks the tie upward.
  EXPECT_EQ(exact({1.0, std::ldexp(1.0, -53), std::ldexp(1.0, -200)}),
            1.0 + std::ldexp(1.0, -52));
}

TEST(ExactSum, Extremes) {
  const double tiny = std::numeric_limits<double>::denorm_min();
  EXPECT_EQ(exact({tiny, tiny, -tiny}), tiny);
  const double big = std::numeric_limits<double>::max();
  EXPECT_EQ(exact({big, -big, big}), big);
  EXPECT_TRUE(std::isinf(exact({big, big})));
  EXPECT_TRUE(std::isnan(exact({1.0, std::numeric_limits<double>::quiet_NaN()})));
  EXPECT_TRUE(std::isinf(exact({1.0, std::numeric_limits<double>::infinity()})));
}

TEST(ExactSum, ManyAddsTriggerCarryFlush) {
  ExactSum s;
  const double x = std::ldexp(1.0, 20) - 1.0;
  const long count = 3'000'000;
  for (long i = 0; i < count; ++i) s.add(x);
  EXPECT_EQ(s.value(), x * static_cast<double>(count));
}

TEST(ExactSumMatrix, CellsAreIndependentAndMergeable) {
  ExactSumMatrix a(2, 3), b(2, 3);
  a(1, 2).add(4.0);
  b(1, 2).add(-1.0);
  b(0, 0).add(7.0);
  a.merge(b);
  EXPECT_EQ(a(1, 2).value(), 3.0);
  EXPECT_EQ(a(0, 0).value(), 7.0);
  EXPECT_TRUE(a(0, 1).is_zero());
}

}  // namespace
}  // namespace altgdmin
