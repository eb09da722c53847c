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

#ifndef ALTGDMIN_TESTS_TEST_UTIL_H_
#define ALTGDMIN_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "altgdmin/linalg.h"

namespace altgdmin::testing {

Matrix random_matrix(int rows, int cols, std::uint64_t seed);
OrthonormalBasis random_basis(int n, int r, std::uint64_t seed);

// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};
CliRun run_cli(const std::vector<std::string>& args);

}  // namespace altgdmin::testing

#endif  // ALTGDMIN_TESTS_TEST_UTIL_H_
