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

#ifndef CORRIDOR_LOSSES_H_
#define CORRIDOR_LOSSES_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "corridor/annotation.h"
#include "corridor/geometry.h"
#include "corridor/scene.h"

namespace corridor {

// Per timestamp (cx, cy, cos theta, sin theta, l, w), concatenated.
using CorridorEncoding = Eigen::VectorXd;
inline constexpr int kEncodingStride = 6;

CorridorEncoding EncodeCorridor(const Corridor& corridor);
// Renormalizes the heading components.
Corridor DecodeCorridor(const CorridorEncoding& encoding);

struct LossValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Obstacle inputs for the safety losses, one point set per timestamp in the
// planning frame. Lane dividers have no wrapper on purpose.
struct CurbPoints {
  std::vector<std::vector<Vec2>> per_t;
};
struct AgentVertices {
  std::vector<std::vector<Vec2>> per_t;
};

CurbPoints CurbPointsFromScene(const Scene& scene, double delta_obs);
AgentVertices AgentVerticesFromScene(const Scene& scene);

// Mean absolute error over the 6N encoded entries; gradient w.r.t. pred.
LossValue CorridorLoss(const CorridorEncoding& pred,
                       const CorridorEncoding& gt);
LossValue CorridorLoss(const Corridor& pred, const Corridor& gt);

// Sum over timestamps of the deepest interior distance among the points.
// Gradient w.r.t. the corridor encoding. The heading is read from the
// normalized (cos, sin) pair.
LossValue MapSafetyLoss(const CorridorEncoding& corridor,
                        const CurbPoints& curbs);
LossValue AgentSafetyLoss(const CorridorEncoding& corridor,
                          const AgentVertices& agents);

// Sum over timestamps of exp(-alpha * l * w).
LossValue AreaLoss(const CorridorEncoding& corridor, double alpha);

// Mean absolute error over the 2N position coordinates; gradient w.r.t. traj
// laid out as (x_1, y_1, x_2, y_2, ...).
LossValue ImitationLoss(std::span<const Vec2> traj, std::span<const Vec2> gt);

// Interior distance of p in rectangle t of an encoding, with its gradient
// w.r.t. that rectangle's six entries. edge is the index of the nearest edge
// (front, rear, left, right) or -1 when the point is not strictly inside.
struct InteriorDepth {
  double value = 0.0;
  Eigen::Matrix<double, 6, 1> gradient = Eigen::Matrix<double, 6, 1>::Zero();
  int edge = -1;
};
InteriorDepth InteriorDepthOf(const Vec2& p, const CorridorEncoding& corridor,
                              int t);

}  // namespace corridor

#endif  // CORRIDOR_LOSSES_H_
