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

#include "altgdmin/federation.h"

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "altgdmin/error.h"

namespace altgdmin {

NodeAssignment partition_columns(int q, int node_count, PartitionPolicy policy) {
  if (node_count < 1 || node_count > q) {
    throw Error(ErrorCode::kTooManyNodes, "node count must be in [1, q], got " +
                                              std::to_string(node_count));
  }
  NodeAssignment out;
  out.q = q;
  out.node_of_column.resize(q);
  out.node_columns.resize(node_count);
  for (int k = 0; k < q; ++k) {
    int node = 0;
    if (policy == PartitionPolicy::kContiguous) {
      node = static_cast<int>((static_cast<std::int64_t>(k) * node_count) / q);
    } else {
      node = k % node_count;
    }
    out.node_of_column[k] = node;
    out.node_columns[node].push_back(k);
  }
  return out;
}

std::int64_t payload_scalar_count(const Payload& payload) {
  struct Counter {
    std::int64_t operator()(const ExactSum&) const { return 1; }
    std::int64_t operator()(const InitColumns& c) const { return c.values.size(); }
    std::int64_t operator()(const ExactSumMatrix& m) const {
      return static_cast<std::int64_t>(m.rows()) * m.cols();
    }
    std::int64_t operator()(double) const { return 1; }
    std::int64_t operator()(const Matrix& m) const { return m.size(); }
  };
  return std::visit(Counter{}, payload);
}

FederatedMessage make_message(Direction direction, PayloadKind kind, int node, int iter,
                              Payload payload) {
  const std::int64_t count = payload_scalar_count(payload);
  return FederatedMessage{direction, kind, node, iter, count, std::move(payload)};
}

LocalPhase restrict_phase(const SketchPhase& phase, const std::vector<int>& columns) {
  LocalPhase local;
  local.columns = columns;
  for (int k : columns) {
    if (k < 0 || k >= phase.q()) {
      throw Error(ErrorCode::kAssignmentMismatch, "column outside the sketch set", k);
    }
    local.a.push_back(&phase.a[k]);
    local.y.push_back(&phase.y[k]);
  }
  return local;
}

namespace {

void check_assignment(const NodeAssignment& assignment, int q) {
  if (assignment.q != q || static_cast<int>(assignment.node_of_column.size()) != q) {
    throw Error(ErrorCode::kAssignmentMismatch, "assignment does not cover q columns");
  }
  std::vector<int> seen(q, 0);
  for (int node = 0; node < assignment.node_count(); ++node) {
    for (int k : assignment.node_columns[node]) {
      if (k < 0 || k >= q || assignment.node_of_column[k] != node) {
        throw Error(ErrorCode::kAssignmentMismatch, "inconsistent column ownership", k);
      }
      ++seen[k];
    }
  }
  for (int k = 0; k < q; ++k) {
    if (seen[k] != 1) {
      throw Error(ErrorCode::kAssignmentMismatch, "column is not owned exactly once", k);
    }
  }
}

ExactSumMatrix local_gradient(const OrthonormalBasis& u, const Matrix& local_b,
                              const LocalPhase& phase) {
  ExactSumMatrix acc(u.rows(), u.cols());
  for (size_t j = 0; j < phase.columns.size(); ++j) {
    accumulate_column_gradient(u, local_b.col(static_cast<Eigen::Index>(j)), *phase.a[j],
                               *phase.y[j], acc);
  }
  return acc;
}

// One participant of the vertical federation. Holds only its own columns.
class Node {
 public:
  Node(int id, std::vector<int> columns, std::vector<LocalPhase> phases)
      : id_(id), columns_(std::move(columns)), phases_(std::move(phases)) {}

  int id() const { return id_; }
  const std::vector<int>& columns() const { return columns_; }
  const Matrix& local_b() const { return local_b_; }

  ExactSum partial_alpha(int phase_index) const {
    const LocalPhase& phase = phases_.at(phase_index);
    ExactSum sum;
    for (const Vector* y : phase.y) {
      for (Eigen::Index i = 0; i < y->size(); ++i) sum.add((*y)(i) * (*y)(i));
    }
    return sum;
  }

  void receive_alpha(double alpha) { alpha_ = alpha; }
  void receive_basis(const Matrix& u) { u_.emplace(u); }

  InitColumns partial_init(int phase_index) const {
    const LocalPhase& phase = phases_.at(phase_index);
    InitColumns out{columns_, Matrix()};
    if (columns_.empty()) return out;
    out.values.resize(phase.a.front()->cols(), static_cast<Eigen::Index>(columns_.size()));
    for (size_t j = 0; j < columns_.size(); ++j) {
      out.values.col(static_cast<Eigen::Index>(j)) = init_column(*phase.a[j], *phase.y[j], alpha_);
    }
    return out;
  }

  void min_step(int phase_index) {
    const LocalPhase& phase = phases_.at(phase_index);
    local_b_.resize(u_->cols(), static_cast<Eigen::Index>(columns_.size()));
    for (size_t j = 0; j < columns_.size(); ++j) {
      local_b_.col(static_cast<Eigen::Index>(j)) =
          min_step_column(*u_, *phase.a[j], *phase.y[j], columns_[j]);
    }
  }

  ExactSumMatrix partial_gradient(int phase_index) const {
    return local_gradient(*u_, local_b_, phases_.at(phase_index));
  }

 private:
  int id_;
  std::vector<int> columns_;
  std::vector<LocalPhase> phases_;
  double alpha_ = 0.0;
  std::optional<OrthonormalBasis> u_;
  Matrix local_b_;
};

}  // namespace

GradientRound federated_gradient_round(const OrthonormalBasis& u, const Matrix& b,
                                       const NodeAssignment& assignment,
                                       const SketchPhase& gd_phase, double step) {
  check_assignment(assignment, gd_phase.q());
  if (b.rows() != u.cols() || b.cols() != gd_phase.q() || gd_phase.n() != u.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "gradient operands have inconsistent shapes");
  }
  std::vector<FederatedMessage> messages;
  for (int node = 0; node < assignment.node_count(); ++node) {
    const auto& cols = assignment.node_columns[node];
    Matrix local_b(b.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) local_b.col(static_cast<Eigen::Index>(j)) = b.col(cols[j]);
    messages.push_back(make_message(Direction::kNodeToCoordinator, PayloadKind::kPartialGradient,
                                    node, 0,
                                    local_gradient(u, local_b, restrict_phase(gd_phase, cols))));
  }
  ExactSumMatrix total(u.rows(), u.cols());
  for (const auto& msg : messages) total.merge(std::get<ExactSumMatrix>(msg.payload));
  Matrix grad = round_gradient(total);
  OrthonormalBasis next = gd_step(u, grad, step);
  messages.push_back(make_message(Direction::kCoordinatorToNode, PayloadKind::kBroadcastU,
                                  kBroadcastTarget, 0, next.matrix()));
  return GradientRound{std::move(grad), std::move(next), std::move(messages)};
}

void write_ledger_csv(std::ostream& os, const std::vector<LedgerEntry>& ledger) {
  os << "iter,node,upload_scalars,download_scalars\n";
  for (const auto& e : ledger) {
    os << e.iter << ',' << e.node << ',' << e.upload_scalars << ',' << e.download_scalars
       << '\n';
  }
}

FederatedResult run_federated_altgdmin(const SolverConfig& cfg, const SketchSet& sketches,
                                       const NodeAssignment& assignment,
                                       const GroundTruth* gt, const IterateCallback& on_iterate) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  cfg.validate(sketches.m());
  if (cfg.split != sketches.split()) {
    throw Error(ErrorCode::kInvalidConfig, "split mode of the config differs from the sketch set");
  }
  if (cfg.split && sketches.split_iterations() < cfg.iterations) {
    throw Error(ErrorCode::kInvalidConfig, "split sketch set covers fewer iterations than t-iters");
  }
  if (gt != nullptr && (gt->n != sketches.n() || gt->q != sketches.q())) {
    throw Error(ErrorCode::kDimensionMismatch, "ground truth and sketches disagree on n, q");
  }
  check_assignment(assignment, sketches.q());
  const int node_count = assignment.node_count();
  const int n = sketches.n();
  const int q = sketches.q();
  const int m = sketches.m();

  std::vector<Node> nodes;
  nodes.reserve(node_count);
  for (int id = 0; id < node_count; ++id) {
    std::vector<LocalPhase> local;
    for (const auto& phase : sketches.phases()) {
      local.push_back(restrict_phase(phase, assignment.node_columns[id]));
    }
    nodes.emplace_back(id, assignment.node_columns[id], std::move(local));
  }

  FederatedResult out{SolverResult{FactorEstimate{OrthonormalBasis(Matrix::Identity(n, cfg.r)),
                                                  Matrix()},
                                   ConvergenceTrace{}, 0.0, 0.0},
                      {}, {}};
  out.solver.trace.has_metrics = gt != nullptr;

  std::vector<LedgerEntry> round_ledger;
  auto open_round = [&](int iter) {
    round_ledger.assign(node_count, LedgerEntry{});
    for (int id = 0; id < node_count; ++id) round_ledger[id] = LedgerEntry{iter, id, 0, 0};
  };
  auto close_round = [&] {
    out.ledger.insert(out.ledger.end(), round_ledger.begin(), round_ledger.end());
  };
  auto log_upload = [&](int iter, PayloadKind kind, int node, std::int64_t count) {
    out.messages.push_back({iter, Direction::kNodeToCoordinator, kind, node, count});
    round_ledger[node].upload_scalars += count;
  };
  auto log_broadcast = [&](int iter, PayloadKind kind, std::int64_t count) {
    out.messages.push_back({iter, Direction::kCoordinatorToNode, kind, kBroadcastTarget, count});
    for (auto& e : round_ledger) e.download_scalars += count;
  };

  // Round 0: threshold, initial matrix, U₀.
  open_round(0);
  const double c_tilde = resolve_c_tilde(cfg, gt);
  ExactSum energy;
  for (const Node& node : nodes) {
    FederatedMessage msg =
        make_message(Direction::kNodeToCoordinator, PayloadKind::kPartialAlpha, node.id(), 0,
                     node.partial_alpha(sketches.alpha_index()));
    log_upload(0, msg.kind, node.id(), msg.scalar_count);
    energy.merge(std::get<ExactSum>(msg.payload));
  }
  out.solver.alpha = alpha_from_sum(energy, m, q, c_tilde);
  log_broadcast(0, PayloadKind::kBroadcastAlpha, payload_scalar_count(Payload{out.solver.alpha}));
  for (Node& node : nodes) node.receive_alpha(out.solver.alpha);

  Matrix x0(n, q);
  for (const Node& node : nodes) {
    FederatedMessage msg = make_message(Direction::kNodeToCoordinator,
                                        PayloadKind::kPartialInitMatrix, node.id(), 0,
                                        node.partial_init(sketches.init_index()));
    log_upload(0, msg.kind, node.id(), msg.scalar_count);
    const auto& cols = std::get<InitColumns>(msg.payload);
    for (size_t j = 0; j < cols.columns.size(); ++j) {
      x0.col(cols.columns[j]) = cols.values.col(static_cast<Eigen::Index>(j));
    }
  }
  const TopSvd init = top_r_svd(x0, cfg.r);
  const double sigma_hat = resolve_sigma_max(cfg, gt, init.sigma(0));
  out.solver.step = cfg.c_eta / (static_cast<double>(m) * sigma_hat * sigma_hat);

  OrthonormalBasis u = init.u;
  log_broadcast(0, PayloadKind::kBroadcastU, u.matrix().size());
  for (Node& node : nodes) node.receive_basis(u.matrix());

  const std::int64_t per_node_upload = static_cast<std::int64_t>(n) * cfg.r;
  Matrix b(cfg.r, q);
  bool stopped = false;
  for (int t = 0;; ++t) {
    if (on_iterate) on_iterate(t, u);
    try {
      for (Node& node : nodes) node.min_step(sketches.ls_index(t + 1));
    } catch (const Error& e) {
      throw e.with_iteration(t);
    }
    // Evaluation only: gather B for metrics and the final estimate.
    for (const Node& node : nodes) {
      for (size_t j = 0; j < node.columns().size(); ++j) {
        b.col(node.columns()[j]) = node.local_b().col(static_cast<Eigen::Index>(j));
      }
    }
    TraceRecord rec = evaluate_record(t, u, b, gt);
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    rec.comm_scalars = t == 0 ? 0 : per_node_upload;
    out.solver.trace.records.push_back(rec);
    if (t == 0) close_round();
    if (t == cfg.iterations || stopped) break;

    open_round(t + 1);
    try {
      ExactSumMatrix total(n, cfg.r);
      for (const Node& node : nodes) {
        FederatedMessage msg =
            make_message(Direction::kNodeToCoordinator, PayloadKind::kPartialGradient, node.id(),
                         t + 1, node.partial_gradient(sketches.gd_index(t + 1)));
        log_upload(t + 1, msg.kind, node.id(), msg.scalar_count);
        total.merge(std::get<ExactSumMatrix>(msg.payload));
      }
      OrthonormalBasis next = gd_step(u, round_gradient(total), out.solver.step);
      if (cfg.stop_tol && subspace_distance_2(next, u) < *cfg.stop_tol) stopped = true;
      u = std::move(next);
    } catch (const Error& e) {
      throw e.with_iteration(t + 1);
    }
    log_broadcast(t + 1, PayloadKind::kBroadcastU, u.matrix().size());
    for (Node& node : nodes) node.receive_basis(u.matrix());
    close_round();
  }
  out.solver.estimate = FactorEstimate{std::move(u), std::move(b)};
  return out;
}

}  // namespace altgdmin
