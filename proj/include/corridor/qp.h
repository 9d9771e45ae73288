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

#ifndef CORRIDOR_QP_H_
#define CORRIDOR_QP_H_

#include <span>
#include <string_view>

#include <Eigen/Core>

namespace corridor {

// minimize 1/2 z'Hz + g'z  s.t.  A_eq z = b_eq,  A_in z <= b_in.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;

  int num_variables() const { return static_cast<int>(g.size()); }
  int num_equalities() const { return static_cast<int>(b_eq.size()); }
  int num_inequalities() const { return static_cast<int>(b_in.size()); }

  // Dimension and symmetry checks; throws InvalidInput.
  void Validate() const;
  double Objective(const Eigen::VectorXd& z) const;
};

enum class QpStatus { kOptimal, kSoftFallback, kFailed };
std::string_view QpStatusName(QpStatus status);

struct QpSolution {
  Eigen::VectorXd z;
  Eigen::VectorXd nu;      // equality multipliers
  Eigen::VectorXd lambda;  // inequality multipliers, >= 0
  Eigen::VectorXd slack;   // soft solves only: one entry per relaxed row
  QpStatus status = QpStatus::kFailed;
  double kkt_residual = 0.0;
  int iterations = 0;
};

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;

  double Max() const;
};

KktResiduals ComputeKktResiduals(const QpProblem& p, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& nu,
                                 const Eigen::VectorXd& lambda);

inline constexpr double kDefaultQpTol = 1e-8;
inline constexpr double kDefaultSlackWeight = 1e3;

// Exact dual active-set solve. Infeasible or unbounded problems return
// kFailed. Throws InvalidInput for malformed data or an indefinite H.
QpSolution SolveQp(const QpProblem& p, double tol = kDefaultQpTol);

// Adds a slack s_i >= 0 to each listed inequality row (a_i z <= b_i + s_i)
// at cost slack_weight * |s|^2. Status is kSoftFallback on success.
QpSolution SolveQpSoft(const QpProblem& p, std::span<const int> slack_rows,
                       double slack_weight = kDefaultSlackWeight,
                       double tol = kDefaultQpTol);

struct QpGradients {
  Eigen::MatrixXd dH;  // symmetric
  Eigen::VectorXd dg;
  Eigen::MatrixXd dA_in;
  Eigen::VectorXd db_in;
  Eigen::MatrixXd dA_eq;
  Eigen::VectorXd db_eq;
  // Set when some row has both multiplier and slack within the margin; the
  // active set is then taken as {lambda > margin}.
  bool degenerate = false;
};

inline constexpr double kComplementarityMargin = 1e-7;

// Gradients of a scalar loss through the solution map, from dL/dz, by
// implicit differentiation of the KKT conditions at the active set. Throws
// InvalidInput unless the solution status is kOptimal.
QpGradients QpBackward(const QpProblem& p, const QpSolution& s,
                       const Eigen::VectorXd& dl_dz,
                       double margin = kComplementarityMargin);

}  // namespace corridor

#endif  // CORRIDOR_QP_H_
