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

#ifndef ALTGDMIN_EXACT_SUM_H_
#define ALTGDMIN_EXACT_SUM_H_

#include <array>
#include <cstdint>
#include <vector>

namespace altgdmin {

// Exact accumulator for sums of doubles. Every finite double is an integer
// multiple of 2^-1074, so the running sum is kept as a wide fixed-point
// integer and rounded to nearest-even exactly once in value(). The result is
// independent of the order in which terms are added or accumulators merged.
class ExactSum {
 public:
  ExactSum();

  void add(double x);
  void merge(const ExactSum& other);
  double value() const;
  bool is_zero() const;

 private:
  // 32-bit digits held in signed 64-bit cells so carries can be deferred.
  static constexpr int kDigits = 70;
  static constexpr std::int64_t kPendingLimit = std::int64_t{1} << 30;

  void normalize() const;

  mutable std::array<std::int64_t, kDigits> digits_;
  mutable std::int64_t pending_ = 0;
  mutable int low_ = kDigits;
  mutable int high_ = -1;
  // Sum of non-finite inputs (inf/nan propagate the usual way).
  double special_ = 0.0;
  bool has_special_ = false;
};

// Column-major rows x cols grid of exact accumulators.
class ExactSumMatrix {
 public:
  ExactSumMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), cells_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  ExactSum& operator()(int i, int j) { return cells_[i + static_cast<size_t>(j) * rows_]; }
  const ExactSum& operator()(int i, int j) const {
    return cells_[i + static_cast<size_t>(j) * rows_];
  }
  void merge(const ExactSumMatrix& other);

 private:
  int rows_;
  int cols_;
  std::vector<ExactSum> cells_;
};

}  // namespace altgdmin

#endif  // ALTGDMIN_EXACT_SUM_H_
