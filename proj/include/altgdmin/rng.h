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

#ifndef ALTGDMIN_RNG_H_
#define ALTGDMIN_RNG_H_

#include <cstdint>
#include <random>
#include <string>

#include "altgdmin/linalg.h"

namespace altgdmin {

// Which measurement set (or generator role) a random stream belongs to.
enum class PhaseKind : std::uint32_t {
  kTruth = 0,
  kAlpha = 1,
  kInit = 2,
  kLeastSquares = 3,
  kGradient = 4,
  kShared = 5,  // the single reused phase when sample splitting is off
  kFresh = 6,   // ad-hoc phases drawn by Monte-Carlo harnesses
};

struct PhaseLabel {
  PhaseKind kind = PhaseKind::kShared;
  int index = 0;  // iteration t for LS/GD, draw number for Fresh, else 0

  std::string to_string() const;
  friend bool operator==(const PhaseLabel&, const PhaseLabel&) = default;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
};

// Child stream seed = hash(master_seed, phase label, k, salt), using the
// splitmix64 finalizer as the mixing function.
std::uint64_t derive_stream_seed(SeedSpec seed, PhaseLabel label, std::uint64_t k,
                                 std::uint64_t salt = 0);

std::uint64_t splitmix64(std::uint64_t x);

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t stream_seed) : engine_(stream_seed) {}
  GaussianStream(SeedSpec seed, PhaseLabel label, std::uint64_t k, std::uint64_t salt = 0)
      : engine_(derive_stream_seed(seed, label, k, salt)) {}

  double next() { return dist_(engine_); }
  // Fills in storage (column-major) order.
  void fill(Matrix& m);
  void fill(Vector& v);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_;
};

}  // namespace altgdmin

#endif  // ALTGDMIN_RNG_H_
