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

#include "corridor/dynamics.h"

#include <cmath>

#include "corridor/error.h"
#include "corridor/geometry.h"

namespace corridor {
namespace {

void CheckArgs(const Control& u, double dt, double wheelbase) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(wheelbase > 0.0)) throw InvalidInput("wheelbase must be positive");
  if (!std::isfinite(u.a) || !std::isfinite(u.delta)) {
    throw InvalidInput("control must be finite");
  }
  if (std::abs(u.delta) >= 0.5 * kPi) {
    throw InvalidInput("steering angle at the tangent singularity");
  }
}

}  // namespace

EgoState Step(const EgoState& x, const Control& u, double dt,
              double wheelbase) {
  CheckArgs(u, dt, wheelbase);
  EgoState next;
  next.px = x.px + x.v * std::cos(x.theta) * dt;
  next.py = x.py + x.v * std::sin(x.theta) * dt;
  next.theta = x.theta + x.v * std::tan(u.delta) / wheelbase * dt;
  next.v = x.v + u.a * dt;
  return next;
}

LinearDynamics Linearize(const EgoState& x_nom, const Control& u_nom,
                         double dt, double wheelbase, LinearizationForm form) {
  CheckArgs(u_nom, dt, wheelbase);
  const double s = std::sin(x_nom.theta);
  const double c = std::cos(x_nom.theta);
  const double v = x_nom.v;

  LinearDynamics lin;
  lin.A(0, 2) = -v * s * dt;
  lin.A(0, 3) = c * dt;
  lin.A(1, 2) = v * c * dt;
  lin.A(1, 3) = s * dt;
  lin.B(3, 0) = dt;
  if (form == LinearizationForm::kStandard) {
    const double cd = std::cos(u_nom.delta);
    lin.A(2, 3) = std::tan(u_nom.delta) / wheelbase * dt;
    lin.B(2, 1) = v / (wheelbase * cd * cd) * dt;
  } else {
    lin.A(2, 3) = std::tan(x_nom.theta) / wheelbase * dt;
    lin.B(2, 1) = v / (wheelbase * c * c) * dt;
  }
  const Eigen::Vector4d next =
      Step(x_nom, u_nom, dt, wheelbase).ToVector();
  lin.c = next - lin.A * x_nom.ToVector() - lin.B * u_nom.ToVector();
  return lin;
}

Trajectory Rollout(const EgoState& x0, std::span<const Control> controls,
                   double dt, double wheelbase) {
  Trajectory out;
  out.reserve(controls.size());
  EgoState x = x0;
  for (const Control& u : controls) {
    x = Step(x, u, dt, wheelbase);
    out.push_back(x);
  }
  return out;
}

Trajectory RolloutLinear(const EgoState& x0, std::span<const Control> controls,
                         std::span<const LinearDynamics> models) {
  if (controls.size() != models.size()) {
    throw InvalidInput("one linear model per control is required");
  }
  Trajectory out;
  out.reserve(controls.size());
  Eigen::Vector4d x = x0.ToVector();
  for (size_t t = 0; t < controls.size(); ++t) {
    x = models[t].A * x + models[t].B * controls[t].ToVector() + models[t].c;
    out.push_back(EgoState::FromVector(x));
  }
  return out;
}

}  // namespace corridor
