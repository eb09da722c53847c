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

#include "altgdmin/container.h"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "altgdmin/error.h"

namespace altgdmin {

namespace {

constexpr char kTruthMagic[8] = {'A', 'L', 'T', 'G', 'D', 'G', 'T', '\0'};
constexpr char kSketchMagic[8] = {'A', 'L', 'T', 'G', 'D', 'S', 'K', '\0'};
constexpr char kEstimateMagic[8] = {'A', 'L', 'T', 'G', 'D', 'F', 'E', '\0'};

// Guards against absurd allocations when reading corrupt headers.
constexpr std::uint64_t kMaxDimension = std::uint64_t{1} << 31;

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void magic(const char (&tag)[8]) {
    os_.write(tag, 8);
    u32(kContainerVersion);
  }
  void u32(std::uint32_t v) { little_endian(v, 4); }
  void u64(std::uint64_t v) { little_endian(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void values(const double* data, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) f64(data[i]);
  }
  void check() {
    if (!os_) throw Error(ErrorCode::kIo, "write failed");
  }

 private:
  void little_endian(std::uint64_t v, int bytes) {
    std::array<char, 8> buf{};
    for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os_.write(buf.data(), bytes);
  }
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  void magic(const char (&tag)[8]) {
    char got[8];
    is_.read(got, 8);
    if (!is_ || std::memcmp(got, tag, 8) != 0) {
      throw Error(ErrorCode::kIo, std::string("bad container magic, expected ") + tag);
    }
    if (u32() != kContainerVersion) throw Error(ErrorCode::kIo, "unsupported container version");
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(little_endian(4)); }
  std::uint64_t u64() { return little_endian(8); }
  int dim() {
    const std::uint64_t v = u64();
    if (v > kMaxDimension) throw Error(ErrorCode::kIo, "container dimension out of range");
    return static_cast<int>(v);
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void values(double* data, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) data[i] = f64();
  }

 private:
  std::uint64_t little_endian(int bytes) {
    std::array<unsigned char, 8> buf{};
    is_.read(reinterpret_cast<char*>(buf.data()), bytes);
    if (!is_) throw Error(ErrorCode::kIo, "truncated container");
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }
  std::istream& is_;
};

template <typename Fn>
void with_output(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  fn(os);
  os.flush();
  if (!os) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

template <typename Fn>
auto with_input(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return fn(is);
}

}  // namespace

void write_ground_truth(std::ostream& os, const GroundTruth& gt) {
  Writer w(os);
  w.magic(kTruthMagic);
  w.u64(gt.n);
  w.u64(gt.q);
  w.u64(gt.r);
  w.u64(gt.seed);
  w.values(gt.u_star.matrix().data(), gt.u_star.matrix().size());
  w.values(gt.sigma_star.data(), gt.sigma_star.size());
  w.values(gt.b_star.data(), gt.b_star.size());
  w.check();
}

GroundTruth read_ground_truth(std::istream& is) {
  Reader rd(is);
  rd.magic(kTruthMagic);
  const int n = rd.dim();
  const int q = rd.dim();
  const int r = rd.dim();
  const std::uint64_t seed = rd.u64();
  if (r < 1 || r > n || r > q) throw Error(ErrorCode::kIo, "ground truth has invalid rank");
  Matrix u(n, r);
  rd.values(u.data(), u.size());
  Vector sigma(r);
  rd.values(sigma.data(), sigma.size());
  Matrix b(r, q);
  rd.values(b.data(), b.size());
  return assemble_ground_truth(OrthonormalBasis(std::move(u)), std::move(sigma), std::move(b),
                               seed);
}

void write_sketch_set(std::ostream& os, const SketchSet& sketches) {
  Writer w(os);
  w.magic(kSketchMagic);
  w.u64(sketches.n());
  w.u64(sketches.q());
  w.u64(sketches.m());
  w.u64(sketches.split() ? 1 : 0);
  w.u64(sketches.phases().size());
  for (const auto& phase : sketches.phases()) {
    w.u32(static_cast<std::uint32_t>(phase.label.kind));
    w.u32(static_cast<std::uint32_t>(phase.label.index));
    for (int k = 0; k < phase.q(); ++k) {
      w.values(phase.a[k].data(), phase.a[k].size());
      w.values(phase.y[k].data(), phase.y[k].size());
    }
  }
  w.check();
}

SketchSet read_sketch_set(std::istream& is) {
  Reader rd(is);
  rd.magic(kSketchMagic);
  const int n = rd.dim();
  const int q = rd.dim();
  const int m = rd.dim();
  const bool split = rd.u64() != 0;
  const int phase_count = rd.dim();
  std::vector<SketchPhase> phases(phase_count);
  for (auto& phase : phases) {
    const std::uint32_t kind = rd.u32();
    if (kind > static_cast<std::uint32_t>(PhaseKind::kFresh)) {
      throw Error(ErrorCode::kIo, "unknown phase kind in sketch container");
    }
    phase.label.kind = static_cast<PhaseKind>(kind);
    phase.label.index = static_cast<int>(rd.u32());
    phase.a.reserve(q);
    phase.y.reserve(q);
    for (int k = 0; k < q; ++k) {
      Matrix a(m, n);
      rd.values(a.data(), a.size());
      Vector y(m);
      rd.values(y.data(), y.size());
      phase.a.push_back(std::move(a));
      phase.y.push_back(std::move(y));
    }
  }
  return SketchSet(n, q, m, split, std::move(phases));
}

void write_factor_estimate(std::ostream& os, const FactorEstimate& estimate) {
  Writer w(os);
  w.magic(kEstimateMagic);
  w.u64(estimate.u.rows());
  w.u64(estimate.u.cols());
  w.u64(estimate.b.cols());
  w.values(estimate.u.matrix().data(), estimate.u.matrix().size());
  w.values(estimate.b.data(), estimate.b.size());
  w.check();
}

FactorEstimate read_factor_estimate(std::istream& is) {
  Reader rd(is);
  rd.magic(kEstimateMagic);
  const int n = rd.dim();
  const int r = rd.dim();
  const int q = rd.dim();
  Matrix u(n, r);
  rd.values(u.data(), u.size());
  Matrix b(r, q);
  rd.values(b.data(), b.size());
  return FactorEstimate{OrthonormalBasis(std::move(u)), std::move(b)};
}

std::string ground_truth_summary_json(const GroundTruth& gt) {
  nlohmann::ordered_json j;
  j["n"] = gt.n;
  j["q"] = gt.q;
  j["r"] = gt.r;
  j["kappa"] = gt.kappa;
  j["mu"] = gt.mu;
  j["seed"] = gt.seed;
  return j.dump(2) + "\n";
}

void save_ground_truth(const std::filesystem::path& path, const GroundTruth& gt) {
  with_output(path, [&](std::ostream& os) { write_ground_truth(os, gt); });
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  return with_input(path, [](std::istream& is) { return read_ground_truth(is); });
}

void save_sketch_set(const std::filesystem::path& path, const SketchSet& sketches) {
  with_output(path, [&](std::ostream& os) { write_sketch_set(os, sketches); });
}

SketchSet load_sketch_set(const std::filesystem::path& path) {
  return with_input(path, [](std::istream& is) { return read_sketch_set(is); });
}

void save_factor_estimate(const std::filesystem::path& path, const FactorEstimate& estimate) {
  with_output(path, [&](std::ostream& os) { write_factor_estimate(os, estimate); });
}

FactorEstimate load_factor_estimate(const std::filesystem::path& path) {
  return with_input(path, [](std::istream& is) { return read_factor_estimate(is); });
}

}  // namespace altgdmin
