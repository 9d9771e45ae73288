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

#ifndef CORRIDOR_DYNAMICS_H_
#define CORRIDOR_DYNAMICS_H_

#include <span>
#include <vector>

#include <Eigen/Core>

namespace corridor {

// Ego state. Headings are kept continuous along a trajectory (not wrapped) so
// that the linear model stays exact across the +-pi seam.
struct EgoState {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double v = 0.0;

  Eigen::Vector4d ToVector() const { return {px, py, theta, v}; }
  static EgoState FromVector(const Eigen::Vector4d& x) {
    return {x(0), x(1), x(2), x(3)};
  }
};

// Acceleration and front steering angle.
struct Control {
  double a = 0.0;
  double delta = 0.0;

  Eigen::Vector2d ToVector() const { return {a, delta}; }
  static Control FromVector(const Eigen::Vector2d& u) { return {u(0), u(1)}; }
};

using Trajectory = std::vector<EgoState>;
using ControlSequence = std::vector<Control>;

// x_{t+1} = A x_t + B u_t + c.
struct LinearDynamics {
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  Eigen::Matrix<double, 4, 2> B = Eigen::Matrix<double, 4, 2>::Zero();
  Eigen::Vector4d c = Eigen::Vector4d::Zero();
};

// kStandard differentiates theta_dot = v tan(delta) / L. kAsPrinted uses the
// heading theta in place of delta in the third row of A and B; it is kept for
// comparison only and is not the Jacobian of Step.
enum class LinearizationForm { kStandard, kAsPrinted };

// Forward-Euler kinematic bicycle step. Throws InvalidInput for
// |delta| >= pi/2, dt <= 0 or wheelbase <= 0.
EgoState Step(const EgoState& x, const Control& u, double dt, double wheelbase);

LinearDynamics Linearize(const EgoState& x_nom, const Control& u_nom, double dt,
                         double wheelbase,
                         LinearizationForm form = LinearizationForm::kStandard);

// States x_1..x_N; state t uses controls[t - 1].
Trajectory Rollout(const EgoState& x0, std::span<const Control> controls,
                   double dt, double wheelbase);

// Propagates the affine models instead of the nonlinear step.
Trajectory RolloutLinear(const EgoState& x0, std::span<const Control> controls,
                         std::span<const LinearDynamics> models);

}  // namespace corridor

#endif  // CORRIDOR_DYNAMICS_H_
