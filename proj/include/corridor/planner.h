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

#ifndef CORRIDOR_PLANNER_H_
#define CORRIDOR_PLANNER_H_

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "corridor/annotation.h"
#include "corridor/dynamics.h"
#include "corridor/geometry.h"
#include "corridor/qp.h"

namespace corridor {

struct PlannerConfig {
  // Tracking weights on (px, py, theta, v) and effort weights on (a, delta).
  std::array<double, 4> q_diag{1.0, 1.0, 0.5, 0.5};
  std::array<double, 2> r_diag{0.1, 0.1};
  Control u_min{-6.0, -0.6};
  Control u_max{4.0, 0.6};
  double dt = 0.5;
  int horizon = 6;
  double wheelbase = 2.7;
  double tol = kDefaultQpTol;
  double slack_weight = kDefaultSlackWeight;
  // Every corridor row is tightened by this much to absorb the error of the
  // linearized dynamics and footprint rotation.
  double safety_margin = 0.2;

  // Throws InvalidInput.
  void Validate() const;
};

struct PlanRequest {
  EgoState x_init;
  Trajectory reference;  // x_1..x_N, planning frame
  Corridor corridor;
  EgoFootprint footprint;

  void Validate(int horizon) const;
};

enum class PlanStatus { kOptimal, kSoftFallback, kReferencePassthrough };
std::string_view PlanStatusName(PlanStatus status);

struct PlanResult {
  Trajectory trajectory;
  ControlSequence controls;
  PlanStatus status = PlanStatus::kReferencePassthrough;
  double solve_time = 0.0;  // seconds, assemble + solve + rollout
};

// Layout of the stacked decision vector z = (x_1..x_N, u_0..u_{N-1}).
inline int StateIndex(int t) { return 4 * (t - 1); }
inline int ControlIndex(int horizon, int t) { return 4 * horizon + 2 * t; }
inline int CorridorRowCount(int horizon) { return 16 * horizon; }

struct AssembledQp {
  QpProblem problem;
  // Affine models x_{t+1} = A x_t + B u_t + c, t = 0..N-1.
  std::vector<LinearDynamics> models;
  // Reference with headings unwrapped against x_init; this is what the cost
  // tracks and what the footprint rows are linearized about.
  Trajectory reference;
};

// Cost rows come first for the corridor (16 per step, step-major, in the
// order of FootprintConstraintRows), then four control bounds per step:
// a <= a_max, delta <= delta_max, -a <= -a_min, -delta <= -delta_min.
AssembledQp AssembleDetailed(const PlanRequest& req, const PlannerConfig& cfg);
QpProblem Assemble(const PlanRequest& req, const PlannerConfig& cfg);

// Hard solve, then a slack solve on the corridor rows, then the reference
// itself. Never throws.
PlanResult Plan(const PlanRequest& req, const PlannerConfig& cfg);

// Selects which parameter groups receive gradient.
struct PlanGradientSwitches {
  bool weights = true;
  bool reference = true;
  bool corridor = true;
};

struct PlanGradients {
  double loss = 0.0;
  std::array<double, 4> d_q{};
  std::array<double, 2> d_r{};
  // Per step d/d(px, py, theta, v) of the reference.
  std::vector<Eigen::Vector4d> d_reference;
  // Per step d/d(cx, cy, theta, l, w) of the corridor rectangle.
  std::vector<Eigen::Matrix<double, 5, 1>> d_corridor;
  bool degenerate = false;
};

// Imitation loss of the rolled-out plan against the demonstration, and its
// gradient through rollout, QP solution map and assembly. The linearization
// nominal is treated as a constant. Throws InvalidInput when the hard solve
// is not optimal.
PlanGradients ImitationGradient(const PlanRequest& req,
                                const PlannerConfig& cfg,
                                std::span<const EgoState> demonstration,
                                const PlanGradientSwitches& switches = {});

// Imitation loss of Plan's trajectory (any status).
double ImitationLossOfPlan(const PlanRequest& req, const PlannerConfig& cfg,
                           std::span<const EgoState> demonstration);

struct FitSample {
  PlanRequest request;
  Trajectory demonstration;
};

struct FitResult {
  std::array<double, 4> q_diag{};
  std::array<double, 2> r_diag{};
  // Mean imitation loss before each step, then after the last one.
  std::vector<double> loss_history;
  // Sample evaluations skipped because the hard solve was not optimal.
  int skipped = 0;
};

inline constexpr double kMinEffortWeight = 1e-6;

// Projected gradient descent on the mean imitation loss over Q and R.
// Throws InvalidInput for an empty dataset.
FitResult FitWeights(std::span<const FitSample> dataset,
                     const PlannerConfig& cfg, int steps, double lr);

}  // namespace corridor

#endif  // CORRIDOR_PLANNER_H_
