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

#include "altgdmin/rng.h"

namespace altgdmin {

std::string PhaseLabel::to_string() const {
  switch (kind) {
    case PhaseKind::kTruth: return "Truth";
    case PhaseKind::kAlpha: return "Alpha";
    case PhaseKind::kInit: return "Init";
    case PhaseKind::kLeastSquares: return "LS(" + std::to_string(index) + ")";
    case PhaseKind::kGradient: return "GD(" + std::to_string(index) + ")";
    case PhaseKind::kShared: return "Shared";
    case PhaseKind::kFresh: return "Fresh(" + std::to_string(index) + ")";
  }
  return "Unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(SeedSpec seed, PhaseLabel label, std::uint64_t k,
                                 std::uint64_t salt) {
  std::uint64_t h = splitmix64(seed.master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(label.kind));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(label.index)));
  h = splitmix64(h ^ k);
  return splitmix64(h ^ salt);
}

void GaussianStream::fill(Matrix& m) {
  double* data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) data[i] = next();
}

void GaussianStream::fill(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = next();
}

}  // namespace altgdmin
