// Copyright 2026 The Corridor Planner Authors
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

#include "corridor/qp.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "corridor/error.h"
#include "oracles.h"
#include "random_problems.h"

namespace corridor {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

QpProblem Scalar(double h, double g, std::vector<double> a, std::vector<double> b) {
  QpProblem p;
  p.H = MatrixXd::Constant(1, 1, h);
  p.g = VectorXd::Constant(1, g);
  p.A_eq.resize(0, 1);
  p.b_eq.resize(0);
  p.A_in = Eigen::Map<VectorXd>(a.data(), a.size());
  p.b_in = Eigen::Map<VectorXd>(b.data(), b.size());
  return p;
}

TEST(QpTest, UnconstrainedTracking) {
  // 0.5 z'(2I)z - 2r'z is |z - r|^2 up to a constant.
  QpProblem p;
  p.H = 2.0 * MatrixXd::Identity(3, 3);
  const VectorXd r = (VectorXd(3) << 1, -2, 0.5).finished();
  p.g = -2.0 * r;
  p.A_eq.resize(0, 3);
  p.b_eq.resize(0);
  p.A_in.resize(0, 3);
  p.b_in.resize(0);
  const QpSolution s = SolveQp(p);
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_LT((s.z - r).norm(), 1e-10);
}

TEST(QpTest, ActiveBound) {
  const QpSolution s = SolveQp(Scalar(2, -4, {1}, {1}));
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z(0), 1.0, 1e-10);
  EXPECT_NEAR(s.lambda(0), 2.0, 1e-10);
  EXPECT_LE(s.kkt_residual, 1e-8);
}

TEST(QpTest, InactiveBound) {
  const QpSolution s = SolveQp(Scalar(2, -4, {1}, {5}));
  EXPECT_NEAR(s.z(0), 2.0, 1e-10);
  EXPECT_EQ(s.lambda(0), 0.0);
}

TEST(QpTest, Equality) {
  QpProblem p;
  p.H = 2.0 * MatrixXd::Identity(2, 2);
  p.g = VectorXd::Zero(2);
  p.A_eq = (MatrixXd(1, 2) << 1, 1).finished();
  p.b_eq = VectorXd::Constant(1, 2);
  p.A_in.resize(0, 2);
  p.b_in.resize(0);
  const QpSolution s = SolveQp(p);
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z(0), 1.0, 1e-10);
  EXPECT_NEAR(s.z(1), 1.0, 1e-10);
  EXPECT_NEAR(s.nu(0), -2.0, 1e-9);
}

TEST(QpTest, InfeasibleRowsFail) {
  const QpSolution s = SolveQp(Scalar(2, 0, {1, -1}, {0, -1}));
  EXPECT_EQ(s.status, QpStatus::kFailed);
}

TEST(QpTest, RejectsBadInput) {
  EXPECT_THROW(SolveQp(Scalar(-1, 0, {1}, {1})), InvalidInput);
  QpProblem asym;
  asym.H = (MatrixXd(2, 2) << 1, 0.5, 0, 1).finished();
  asym.g = VectorXd::Zero(2);
  asym.A_eq.resize(0, 2);
  asym.b_eq.resize(0);
  asym.A_in.resize(0, 2);
  asym.b_in.resize(0);
  EXPECT_THROW(SolveQp(asym), InvalidInput);
  QpProblem nan = Scalar(2, std::nan(""), {1}, {1});
  EXPECT_THROW(SolveQp(nan), InvalidInput);
  QpProblem wrong = Scalar(2, 0, {1}, {1});
  wrong.b_in.resize(2);
  EXPECT_THROW(SolveQp(wrong), InvalidInput);
}

TEST(QpTest, SemidefiniteWithBounds) {
  QpProblem p = Scalar(0, -1, {1}, {3});
  const QpSolution s = SolveQp(p);
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z(0), 3.0, 1e-8);
}

TEST(QpTest, MatchesEnumerationOracle) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    const int me = k % 3 == 0 ? 1 : 0;
    const QpProblem p = testing::RandomQp(rng, n, me, 3 + k % 6);
    const auto oracle_sol = oracle::EnumerateQp(p);
    ASSERT_TRUE(oracle_sol.has_value());
    const QpSolution s = SolveQp(p);
    ASSERT_EQ(s.status, QpStatus::kOptimal) << k;
    EXPECT_LT((s.z - oracle_sol->z).lpNorm<Eigen::Infinity>(), 1e-6) << k;
    EXPECT_LE(ComputeKktResiduals(p, s.z, s.nu, s.lambda).Max(), 1e-8) << k;
    EXPECT_GE(s.lambda.minCoeff(), 0.0);
  }
}

TEST(QpSoftTest, ConflictingRowsSplit) {
  const QpProblem p = Scalar(2, 0, {1, -1}, {0, -1});
  const std::vector<int> rows{0, 1};
  double previous = 0.0;
  for (double w : {1e2, 1e4, 1e6}) {
    const QpSolution s = SolveQpSoft(p, rows, w);
    ASSERT_EQ(s.status, QpStatus::kSoftFallback);
    EXPECT_NEAR(s.z(0), w / (1 + 2 * w), 1e-8);
    EXPECT_GT(s.z(0), previous);
    previous = s.z(0);
    ASSERT_EQ(s.slack.size(), 2);
    EXPECT_NEAR(s.slack(0), s.z(0), 1e-8);
    EXPECT_NEAR(s.slack(1), 1 - s.z(0), 1e-8);
  }
  EXPECT_NEAR(previous, 0.5, 1e-6);
}

TEST(QpSoftTest, FeasibleProblemMatchesHardSolve) {
  // With a large weight the soft solution of a feasible problem approaches
  // the hard one.
  std::mt19937_64 rng(3);
  const QpProblem p = testing::RandomQp(rng, 4, 0, 6);
  const std::vector<int> rows{0, 1, 2, 3, 4, 5};
  const QpSolution hard = SolveQp(p);
  const QpSolution soft = SolveQpSoft(p, rows, 1e8);
  EXPECT_LT((hard.z - soft.z).norm(), 1e-5);
  EXPECT_LT(soft.slack.lpNorm<Eigen::Infinity>(), 1e-5);
}

TEST(QpSoftTest, RejectsBadRows) {
  const QpProblem p = Scalar(2, 0, {1}, {0});
  EXPECT_THROW(SolveQpSoft(p, std::vector<int>{0, 0}), InvalidInput);
  EXPECT_THROW(SolveQpSoft(p, std::vector<int>{1}), InvalidInput);
  EXPECT_THROW(SolveQpSoft(p, std::vector<int>{0}, 0.0), InvalidInput);
}

TEST(QpBackwardTest, ScalarExamples) {
  // min (z - c)^2 with z <= b active: z = b, so dz/db = 1 and dz/dg = 0.
  const QpProblem p = Scalar(2, -4, {1}, {1});
  const QpSolution s = SolveQp(p);
  const QpGradients g = QpBackward(p, s, VectorXd::Ones(1));
  EXPECT_NEAR(g.db_in(0), 1.0, 1e-10);
  EXPECT_NEAR(g.dg(0), 0.0, 1e-10);
  // Inactive: z = -g/h, so dz/dg = -1/h and db is exactly zero.
  const QpProblem q = Scalar(2, -4, {1}, {5});
  const QpGradients gi = QpBackward(q, SolveQp(q), VectorXd::Ones(1));
  EXPECT_NEAR(gi.dg(0), -0.5, 1e-12);
  EXPECT_EQ(gi.db_in(0), 0.0);
  EXPECT_EQ(gi.dA_in(0, 0), 0.0);
  EXPECT_FALSE(gi.degenerate);
}

TEST(QpBackwardTest, RefusesNonOptimal) {
  const QpProblem p = Scalar(2, 0, {1, -1}, {0, -1});
  const QpSolution s = SolveQpSoft(p, std::vector<int>{0, 1});
  EXPECT_THROW(QpBackward(p, s, VectorXd::Ones(1)), InvalidInput);
}

TEST(QpBackwardTest, DegenerateFlagged) {
  // Unconstrained optimum sits exactly on the bound.
  const QpProblem p = Scalar(2, -2, {1}, {1});
  const QpGradients g = QpBackward(p, SolveQp(p), VectorXd::Ones(1));
  EXPECT_TRUE(g.degenerate);
}

// Loss is a fixed linear functional of z; compare against central
// differences of the re-solved QP in every input.
TEST(QpBackwardTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int k = 0; checked < 30 && k < 300; ++k) {
    const QpProblem p = testing::RandomQp(rng, 4, k % 2, 5);
    const QpSolution s = SolveQp(p);
    ASSERT_EQ(s.status, QpStatus::kOptimal);
    const VectorXd slack = p.b_in - p.A_in * s.z;
    bool strict = true;
    for (int i = 0; i < p.num_inequalities(); ++i) {
      strict = strict && (s.lambda(i) > 1e-4 || slack(i) > 1e-4);
    }
    if (!strict) continue;
    ++checked;
    const VectorXd a = testing::RandomMatrix(rng, 4, 1);
    const QpGradients grad = QpBackward(p, s, a);
    EXPECT_FALSE(grad.degenerate);
    const auto loss = [&](const QpProblem& q) { return a.dot(SolveQp(q).z); };

    // Pack (g, b_in, A_in, b_eq, symmetric H) into one vector.
    const auto pack_grad = [&](const QpGradients& gr) {
      std::vector<double> v(gr.dg.data(), gr.dg.data() + gr.dg.size());
      for (int i = 0; i < p.num_inequalities(); ++i) v.push_back(gr.db_in(i));
      for (int i = 0; i < gr.dA_in.size(); ++i) v.push_back(gr.dA_in.data()[i]);
      for (int i = 0; i < p.num_equalities(); ++i) v.push_back(gr.db_eq(i));
      for (int i = 0; i < gr.dA_eq.size(); ++i) v.push_back(gr.dA_eq.data()[i]);
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) v.push_back(i == j ? gr.dH(i, i) : 2.0 * gr.dH(i, j));
      }
      return Eigen::Map<VectorXd>(v.data(), v.size()).eval();
    };
    const auto perturbed = [&](int idx, double h) {
      QpProblem q = p;
      int at = idx;
      if (at < q.g.size()) { q.g(at) += h; return q; }
      at -= q.g.size();
      if (at < q.b_in.size()) { q.b_in(at) += h; return q; }
      at -= q.b_in.size();
      if (at < q.A_in.size()) { q.A_in.data()[at] += h; return q; }
      at -= q.A_in.size();
      if (at < q.b_eq.size()) { q.b_eq(at) += h; return q; }
      at -= q.b_eq.size();
      if (at < q.A_eq.size()) { q.A_eq.data()[at] += h; return q; }
      at -= q.A_eq.size();
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j, --at) {
          if (at == 0) {
            q.H(i, j) += h;
            if (i != j) q.H(j, i) += h;
            return q;
          }
        }
      }
      return q;
    };
    const VectorXd analytic = pack_grad(grad);
    VectorXd numeric(analytic.size());
    const double h = 1e-6;
    for (int i = 0; i < analytic.size(); ++i) {
      numeric(i) = (loss(perturbed(i, h)) - loss(perturbed(i, -h))) / (2 * h);
    }
    EXPECT_LT(oracle::RelErr(analytic, numeric), 1e-4) << k;
    for (int i = 0; i < p.num_inequalities(); ++i) {
      if (s.lambda(i) == 0.0) {
        EXPECT_EQ(grad.db_in(i), 0.0);
        EXPECT_EQ(grad.dA_in.row(i).norm(), 0.0);
      }
    }
  }
  EXPECT_EQ(checked, 30);
}

}  // namespace
}  // namespace corridor
