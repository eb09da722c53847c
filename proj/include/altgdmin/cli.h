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

#ifndef ALTGDMIN_CLI_H_
#define ALTGDMIN_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace altgdmin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Parsed flags of one subcommand. Flags that also appear in a --config JSON
// file override the file.
struct CliConfig {
  std::string subcommand;  // gen, solve, federate, bench, grad-check, lemma-check

  // Instance generation, or a directory written by `gen`.
  int n = 100;
  int q = 200;
  int r = 2;
  double kappa = 2.0;
  int m = 60;
  std::uint64_t seed = 0;
  std::string instance;

  // Solver.
  int t_iters = 100;
  double c_eta = 0.4;
  double c_tilde = 0.0;  // 0: 9κ²μ² from the ground truth
  std::string sigma_max_mode = "oracle";
  std::string split = "off";
  double stop_tol = 0.0;  // 0: run all T iterations

  // Federation.
  int nodes = 4;
  std::string policy = "contig";

  // Bench and oracle suites.
  std::string grid;
  double eps = 1e-6;
  int trials = 0;  // 0: subcommand default
  int samples = 2000;
  double delta = 0.01;
  double eps1 = 0.1;
  int workers = 1;

  std::string config;
  std::string out;
  bool timing = false;
};

// Arguments exclude the program name. Messages go to `out` and `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int parse_and_dispatch(int argc, const char* const* argv);

}  // namespace altgdmin

#endif  // ALTGDMIN_CLI_H_
