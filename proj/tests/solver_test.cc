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

#include "altgdmin/solver.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "altgdmin/error.h"
#include "test_util.h"

namespace altgdmin {
namespace {

using testing::random_basis;
using testing::random_matrix;

SketchPhase phase_of(std::vector<Matrix> a, std::vector<Vector> y) {
  return SketchPhase{{PhaseKind::kShared, 0}, std::move(a), std::move(y)};
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Alpha, HandExample) {
  const SketchPhase p = phase_of({Matrix::Zero(2, 3)}, {vec({1, 3})});
  EXPECT_DOUBLE_EQ(compute_alpha(p, 9.0), 45.0);
}

TEST(Alpha, ZeroMeasurements) {
  const SketchPhase p = phase_of({Matrix::Zero(4, 2), Matrix::Zero(4, 2)},
                                 {Vector::Zero(4), Vector::Zero(4)});
  EXPECT_EQ(compute_alpha(p, 9.0), 0.0);
}

TEST(Alpha, Homogeneous) {
  const Vector y1 = random_matrix(5, 1, 1).col(0);
  const Vector y2 = random_matrix(5, 1, 2).col(0);
  const double base = compute_alpha(phase_of({Matrix::Zero(5, 1), Matrix::Zero(5, 1)}, {y1, y2}), 2.0);
  const double scaled = compute_alpha(
      phase_of({Matrix::Zero(5, 1), Matrix::Zero(5, 1)}, {4.0 * y1, 4.0 * y2}), 2.0);
  EXPECT_NEAR(scaled, 16.0 * base, 1e-13 * scaled);
}

TEST(Alpha, EmptyPhaseThrows) {
  try {
    compute_alpha(phase_of({}, {}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPhase);
  }
}

TEST(Truncate, Examples) {
  EXPECT_EQ(truncate(vec({1, 2, 3}), 4.0), vec({1, 2, 0}));
  EXPECT_EQ(truncate(vec({-1, 2, -3}), 9.0), vec({-1, 2, -3}));
  EXPECT_EQ(truncate(vec({-1, 2, -3}), 0.0), vec({0, 0, 0}));
}

TEST(Init, SingleColumnIsNormalizedColumn) {
  const GroundTruth gt = generate_ground_truth(6, 1, 1, 1.0, SeedSpec{1});
  const SketchPhase p = draw_phase(gt.x_star, 8, {PhaseKind::kShared, 0}, SeedSpec{1});
  const Matrix x0 = init_matrix(p, 1e300);
  EXPECT_EQ(x0.cols(), 1);
  const OrthonormalBasis u0 = spectral_init(p, 1e300, 1);
  EXPECT_LE(subspace_distance_2(u0, OrthonormalBasis(x0.normalized())), 1e-14);
}

TEST(Init, ErrorShrinksWithMoreMeasurements) {
  double prev = 2.0;
  for (int m : {30, 60, 120}) {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const GroundTruth gt = generate_ground_truth(100, 200, 2, 2.0, SeedSpec{s});
      const SketchPhase p = draw_phase(gt.x_star, m, {PhaseKind::kShared, 0}, SeedSpec{s});
      total += subspace_distance_2(spectral_init(p, INFINITY, 2), gt.u_star);
    }
    EXPECT_LT(total / 5, prev);
    prev = total / 5;
  }
}

TEST(MinStep, ExactAtTrueBasis) {
  const GroundTruth gt = generate_ground_truth(40, 30, 3, 2.0, SeedSpec{2});
  const SketchPhase p = draw_phase(gt.x_star, 12, {PhaseKind::kShared, 0}, SeedSpec{2});
  const Matrix b = min_step(gt.u_star, p);
  EXPECT_LE((b - gt.b_star).norm() / gt.b_star.norm(), 1e-12);
}

TEST(MinStep, SquareSystem) {
  const OrthonormalBasis u = random_basis(6, 2, 3);
  const Matrix a = random_matrix(2, 6, 4);
  const Vector y = vec({1.0, -2.0});
  const Vector b = min_step_column(u, a, y, 0);
  EXPECT_LE((b - (a * u.matrix()).inverse() * y).norm(), 1e-12);
}

TEST(MinStep, RankDeficientNamesColumn) {
  const OrthonormalBasis u = random_basis(6, 2, 3);
  const SketchPhase p = phase_of({random_matrix(3, 6, 1), Matrix::Zero(3, 6)},
                                 {Vector::Ones(3), Vector::Ones(3)});
  try {
    min_step(u, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
    EXPECT_EQ(e.column(), 1);
  }
}

TEST(Gradient, ZeroAtTruth) {
  const GroundTruth gt = generate_ground_truth(20, 10, 2, 2.0, SeedSpec{5});
  const SketchPhase p = draw_phase(gt.x_star, 15, {PhaseKind::kShared, 0}, SeedSpec{5});
  const Matrix g = gradient(gt.u_star, gt.b_star, p);
  EXPECT_TRUE(g.isZero(0.0));
}

TEST(Gradient, MatchesDirectFormula) {
  const GroundTruth gt = generate_ground_truth(12, 8, 2, 2.0, SeedSpec{6});
  const SketchPhase p = draw_phase(gt.x_star, 9, {PhaseKind::kShared, 0}, SeedSpec{6});
  const OrthonormalBasis u = random_basis(12, 2, 7);
  const Matrix b = random_matrix(2, 8, 8);
  Matrix direct = Matrix::Zero(12, 2);
  for (int k = 0; k < 8; ++k) {
    direct += p.a[k].transpose() * (p.a[k] * u.matrix() * b.col(k) - p.y[k]) *
              b.col(k).transpose();
  }
  EXPECT_LE((gradient(u, b, p) - direct).norm(), 1e-12 * direct.norm());
}

TEST(Gradient, ShapeMismatchThrows) {
  const SketchPhase p = phase_of({random_matrix(3, 5, 1)}, {Vector::Ones(3)});
  EXPECT_THROW(gradient(random_basis(5, 2, 1), Matrix::Zero(2, 2), p), Error);
}

TEST(GdStep, FixedPoints) {
  const OrthonormalBasis u = random_basis(9, 3, 1);
  EXPECT_EQ(gd_step(u, Matrix::Zero(9, 3), 0.5).matrix(), u.matrix());
  EXPECT_EQ(gd_step(u, random_matrix(9, 3, 2), 0.0).matrix(), u.matrix());
  const OrthonormalBasis moved = gd_step(u, random_matrix(9, 3, 2), 0.1);
  EXPECT_LE(moved.orthonormality_error(), 1e-12);
  EXPECT_GT(subspace_distance_2(moved, u), 0.0);
}

TEST(Config, Validation) {
  SolverConfig cfg;
  cfg.r = 2;
  cfg.iterations = 5;
  EXPECT_NO_THROW(cfg.validate(2));
  auto message_of = [](const SolverConfig& c, int m) {
    try {
      c.validate(m);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message_of(cfg, 1).find("m must be ≥ r"), std::string::npos);
  SolverConfig bad = cfg;
  bad.c_eta = 0.7;
  EXPECT_NE(message_of(bad, 10).find("c-eta"), std::string::npos);
  bad = cfg;
  bad.iterations = 0;
  EXPECT_NE(message_of(bad, 10).find("t-iters"), std::string::npos);
  bad = cfg;
  bad.r = 0;
  EXPECT_NE(message_of(bad, 10).find("r must"), std::string::npos);
}

SolverConfig standard_config(int r, int iterations) {
  SolverConfig cfg;
  cfg.r = r;
  cfg.iterations = iterations;
  return cfg;
}

TEST(Run, RecoversSmallInstance) {
  const GroundTruth gt = generate_ground_truth(40, 80, 2, 2.0, SeedSpec{3});
  const SketchSet s = sketch(gt, 30, 1, false, SeedSpec{3});
  const SolverResult res = run_altgdmin(standard_config(2, 300), s, &gt);
  ASSERT_EQ(res.trace.records.size(), 301u);
  const TraceRecord& last = res.trace.records.back();
  EXPECT_LE(last.se2, 1e-8);
  EXPECT_LE(last.max_rel_col_err, 10.0 * last.se2 + 1e-14);
  EXPECT_LE((res.estimate.x() - gt.x_star).norm() / gt.x_star.norm(), 1e-7);
  EXPECT_EQ(res.trace.records[0].comm_scalars, 0);
  EXPECT_EQ(res.trace.records[1].comm_scalars, 80);
}

TEST(Run, SplitMode) {
  const GroundTruth gt = generate_ground_truth(30, 60, 2, 2.0, SeedSpec{4});
  const SketchSet s = sketch(gt, 30, 2 * 40 + 2, true, SeedSpec{4});
  SolverConfig cfg = standard_config(2, 40);
  cfg.split = true;
  const SolverResult res = run_altgdmin(cfg, s, &gt);
  EXPECT_LT(res.trace.records.back().se2, 0.1 * res.trace.records.front().se2);
  cfg.split = false;
  EXPECT_THROW(run_altgdmin(cfg, s, &gt), Error);
}

TEST(Run, FullyDeterminedSystemConverges) {
  const GroundTruth gt = generate_ground_truth(4, 4, 4, 1.0, SeedSpec{5});
  const SketchSet s = sketch(gt, 6, 1, false, SeedSpec{5});
  const SolverResult res = run_altgdmin(standard_config(4, 3), s, &gt);
  EXPECT_LE(res.trace.records.back().rel_fro_err, 1e-10);
}

TEST(Run, EveryIterateIsOrthonormal) {
  const GroundTruth gt = generate_ground_truth(30, 40, 3, 2.0, SeedSpec{6});
  const SketchSet s = sketch(gt, 20, 1, false, SeedSpec{6});
  int seen = 0;
  double worst = 0.0;
  run_altgdmin(standard_config(3, 50), s, &gt, [&](int t, const OrthonormalBasis& u) {
    EXPECT_EQ(t, seen);
    ++seen;
    worst = std::max(worst, u.orthonormality_error());
  });
  EXPECT_EQ(seen, 51);
  EXPECT_LE(worst, 1e-10);
}

TEST(Run, StopTolerance) {
  const GroundTruth gt = generate_ground_truth(30, 60, 2, 2.0, SeedSpec{7});
  const SketchSet s = sketch(gt, 30, 1, false, SeedSpec{7});
  SolverConfig cfg = standard_config(2, 1000);
  cfg.stop_tol = 1e-6;
  const SolverResult res = run_altgdmin(cfg, s, &gt);
  EXPECT_LT(res.trace.records.size(), 1001u);
}

TEST(Run, EstimatedSigmaAlsoConverges) {
  const GroundTruth gt = generate_ground_truth(40, 80, 2, 2.0, SeedSpec{8});
  const SketchSet s = sketch(gt, 30, 1, false, SeedSpec{8});
  SolverConfig cfg = standard_config(2, 400);
  cfg.sigma_max_mode = SigmaMaxMode::kEstimateFromInit;
  EXPECT_LE(run_altgdmin(cfg, s, &gt).trace.records.back().se2, 1e-8);
}

TEST(Run, WithoutTruthNeedsExplicitConstants) {
  const GroundTruth gt = generate_ground_truth(20, 30, 2, 2.0, SeedSpec{9});
  const SketchSet s = sketch(gt, 15, 1, false, SeedSpec{9});
  SolverConfig cfg = standard_config(2, 5);
  EXPECT_THROW(run_altgdmin(cfg, s, nullptr), Error);
  cfg.c_tilde = 9.0 * gt.kappa * gt.kappa * gt.mu * gt.mu;
  cfg.sigma_max_mode = SigmaMaxMode::kEstimateFromInit;
  const SolverResult res = run_altgdmin(cfg, s, nullptr);
  EXPECT_FALSE(res.trace.has_metrics);
  EXPECT_TRUE(std::isnan(res.trace.records.back().se2));
}

TEST(Run, DeterministicTrace) {
  const GroundTruth gt = generate_ground_truth(20, 30, 2, 2.0, SeedSpec{10});
  const SketchSet s = sketch(gt, 15, 1, false, SeedSpec{10});
  std::ostringstream a, b;
  write_trace_csv(a, run_altgdmin(standard_config(2, 30), s, &gt).trace, false);
  write_trace_csv(b, run_altgdmin(standard_config(2, 30), s, &gt).trace, false);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "iter,se2,seF,max_rel_col_err,rel_fro_err,elapsed_ms,comm_scalars");
}

TEST(Run, ErrorsCarryIteration) {
  const GroundTruth gt = generate_ground_truth(10, 5, 2, 2.0, SeedSpec{11});
  SketchSet s = sketch(gt, 4, 1, false, SeedSpec{11});
  std::vector<SketchPhase> phases = s.phases();
  phases[0].a[3].setZero();
  const SketchSet broken(10, 5, 4, false, phases);
  try {
    run_altgdmin(standard_config(2, 3), broken, &gt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
    EXPECT_EQ(e.iteration(), 0);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(TraceCsv, EmptyMetricsWithoutTruth) {
  ConvergenceTrace trace;
  trace.records.push_back(TraceRecord{0, NAN, NAN, NAN, NAN, 1.5, 0});
  std::ostringstream os;
  write_trace_csv(os, trace, false);
  EXPECT_EQ(os.str(), "iter,se2,seF,max_rel_col_err,rel_fro_err,elapsed_ms,comm_scalars\n0,,,,,,0\n");
  std::ostringstream timed;
  write_trace_csv(timed, trace, true);
  EXPECT_NE(timed.str().find(",1.500,"), std::string::npos);
}

}  // namespace
}  // namespace altgdmin
