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

#ifndef ALTGDMIN_CONTAINER_H_
#define ALTGDMIN_CONTAINER_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "altgdmin/model.h"
#include "altgdmin/solver.h"

// Binary container: an 8-byte magic tag, a u32 format version, then
// little-endian u64 dimensions and IEEE-754 binary64 values in column-major
// order, independent of host byte order.
//
//   truth     "ALTGDGT\0" v1 | n q r seed | U⋆ (n·r) | σ⋆ (r) | B⋆ (r·q)
//   sketches  "ALTGDSK\0" v1 | n q m split phase_count |
//             per phase: u32 kind, u32 index, per column: A_k (m·n), y_k (m)
//   estimate  "ALTGDFE\0" v1 | n r q | U (n·r) | B (r·q)
namespace altgdmin {

inline constexpr unsigned kContainerVersion = 1;

void write_ground_truth(std::ostream& os, const GroundTruth& gt);
GroundTruth read_ground_truth(std::istream& is);

void write_sketch_set(std::ostream& os, const SketchSet& sketches);
SketchSet read_sketch_set(std::istream& is);

void write_factor_estimate(std::ostream& os, const FactorEstimate& estimate);
FactorEstimate read_factor_estimate(std::istream& is);

// {"n","q","r","kappa","mu","seed"}.
std::string ground_truth_summary_json(const GroundTruth& gt);

// File wrappers; throw kIo on open/read failures.
void save_ground_truth(const std::filesystem::path& path, const GroundTruth& gt);
GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_sketch_set(const std::filesystem::path& path, const SketchSet& sketches);
SketchSet load_sketch_set(const std::filesystem::path& path);
void save_factor_estimate(const std::filesystem::path& path, const FactorEstimate& estimate);
FactorEstimate load_factor_estimate(const std::filesystem::path& path);

}  // namespace altgdmin

#endif  // ALTGDMIN_CONTAINER_H_
