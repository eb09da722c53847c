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

#include "test_util.h"

#include <fstream>
#include <sstream>

#include <unistd.h>

#include "altgdmin/cli.h"
#include "altgdmin/rng.h"

namespace altgdmin::testing {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  GaussianStream(seed).fill(m);
  return m;
}

OrthonormalBasis random_basis(int n, int r, std::uint64_t seed) {
  return qr_orthonormalize(random_matrix(n, r, seed)).q;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("altgdmin_test_" + std::to_string(::getpid())) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun run;
  run.code = parse_and_dispatch(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

}  // namespace altgdmin::testing
