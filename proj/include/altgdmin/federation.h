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

#ifndef ALTGDMIN_FEDERATION_H_
#define ALTGDMIN_FEDERATION_H_

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "altgdmin/exact_sum.h"
#include "altgdmin/linalg.h"
#include "altgdmin/model.h"
#include "altgdmin/solver.h"

namespace altgdmin {

enum class PartitionPolicy { kContiguous, kRoundRobin };

struct NodeAssignment {
  int q = 0;
  std::vector<int> node_of_column;             // size q
  std::vector<std::vector<int>> node_columns;  // ascending column ids per node

  int node_count() const { return static_cast<int>(node_columns.size()); }
};

// Contiguous: balanced blocks in column order. RoundRobin: k -> k mod N.
NodeAssignment partition_columns(int q, int node_count, PartitionPolicy policy);

enum class Direction { kNodeToCoordinator, kCoordinatorToNode };

enum class PayloadKind {
  kPartialAlpha,       // 1 scalar: exact Σ y² over the node's columns
  kPartialInitMatrix,  // n per owned column: the node's columns of X̂₀
  kPartialGradient,    // n·r scalars
  kBroadcastAlpha,     // 1 scalar
  kBroadcastU,         // n·r scalars
};

struct InitColumns {
  std::vector<int> columns;
  Matrix values;  // n x columns.size()
};

using Payload = std::variant<ExactSum, InitColumns, ExactSumMatrix, double, Matrix>;

inline constexpr int kBroadcastTarget = -1;

struct FederatedMessage {
  Direction direction;
  PayloadKind kind;
  int node;  // sender for uploads; kBroadcastTarget for broadcasts
  int iter;
  std::int64_t scalar_count;
  Payload payload;
};

// Real scalars carried by a payload.
std::int64_t payload_scalar_count(const Payload& payload);
FederatedMessage make_message(Direction direction, PayloadKind kind, int node, int iter,
                              Payload payload);

// The sketches of one node's columns. A node is constructed from these views
// only and never sees another node's A_k or y_k.
struct LocalPhase {
  std::vector<int> columns;
  std::vector<const Matrix*> a;
  std::vector<const Vector*> y;
};

LocalPhase restrict_phase(const SketchPhase& phase, const std::vector<int>& columns);

struct GradientRound {
  Matrix gradient;
  OrthonormalBasis next_u;  // gd_step(u, gradient, step)
  std::vector<FederatedMessage> messages;
};

// Every node uploads Σ_{k∈node} A_kᵀ(A_k U b_k − y_k) b_kᵀ; the coordinator
// merges in ascending node order, rounds once, takes the projected GD step and
// broadcasts the new basis. The total equals gradient() bit for bit.
GradientRound federated_gradient_round(const OrthonormalBasis& u, const Matrix& b,
                                       const NodeAssignment& assignment,
                                       const SketchPhase& gd_phase, double step = 0.0);

struct LedgerEntry {
  int iter = 0;
  int node = 0;
  std::int64_t upload_scalars = 0;
  std::int64_t download_scalars = 0;
};

struct MessageHeader {
  int iter;
  Direction direction;
  PayloadKind kind;
  int node;
  std::int64_t scalar_count;
};

struct FederatedResult {
  SolverResult solver;
  std::vector<LedgerEntry> ledger;  // ordered by (iter, node)
  std::vector<MessageHeader> messages;
};

// Header: iter,node,upload_scalars,download_scalars.
void write_ledger_csv(std::ostream& os, const std::vector<LedgerEntry>& ledger);

// Same contract as run_altgdmin, executed as coordinator + nodes. The trace is
// bit-identical to the centralized one for any assignment.
FederatedResult run_federated_altgdmin(const SolverConfig& cfg, const SketchSet& sketches,
                                       const NodeAssignment& assignment,
                                       const GroundTruth* gt = nullptr,
                                       const IterateCallback& on_iterate = {});

}  // namespace altgdmin

#endif  // ALTGDMIN_FEDERATION_H_
