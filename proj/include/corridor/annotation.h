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

#ifndef CORRIDOR_ANNOTATION_H_
#define CORRIDOR_ANNOTATION_H_

#include <span>
#include <vector>

#include "corridor/geometry.h"
#include "corridor/scene.h"

namespace corridor {

// One rectangle per future timestamp t = 1..N, in the planning frame (ego
// frame at t = 0).
struct Corridor {
  std::vector<OrientedRect> rects;
  // Set for timestamps that fell back to the minimum rectangle.
  std::vector<bool> degenerate;

  size_t size() const { return rects.size(); }
  bool AnyDegenerate() const;
};

// Corridor with no degenerate flags set.
Corridor MakeCorridor(std::vector<OrientedRect> rects);

// Full extents of the search box, centered on the anchor.
struct MerBoundary {
  double l_max = 30.0;
  double w_max = 15.0;
};

struct AxisRect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double Area() const { return (x_max - x_min) * (y_max - y_min); }
};

inline constexpr double kBlockedAnchorRadius = 1e-6;

// Largest axis-aligned rectangle inside the boundary that contains the anchor
// and has no point strictly in its interior. Points on edges are allowed. Ties
// go to the lexicographically smallest (x_min, y_min).
// Throws BlockedAnchor if a point lies within kBlockedAnchorRadius of the
// anchor.
AxisRect SolveMer(std::span<const Vec2> points, const MerBoundary& boundary,
                  const Vec2& anchor);

struct AnnotationConfig {
  double delta_obs = 0.5;
  MerBoundary boundary;
  TimeInterval t_ego{-5.0, 5.0};
};

struct AnnotationResult {
  Corridor corridor;
  // Timestamps (1-based) that needed the finer resampling pass.
  std::vector<int> resampled;
  // Timestamps (1-based) that stayed blocked and were replaced by the minimum
  // rectangle.
  std::vector<int> failed;

  bool flagged() const { return !failed.empty(); }
};

// Ground-truth corridor from the scene's obstacles and future ego poses.
AnnotationResult AnnotateCorridor(const Scene& scene,
                                  const AnnotationConfig& config = {});

inline constexpr double kDegenerateSize = 0.2;

// Shrinks each predicted rectangle so that no perceived point (planning
// frame, one set per timestamp) is strictly inside it. The center and the
// heading of each prediction are kept as the MER anchor and frame.
Corridor RefineCorridor(const Corridor& predicted,
                        std::span<const std::vector<Vec2>> perceived);

// Obstacle points of the scene at each future timestamp, planning frame.
// Lanes are filtered with LaneFilter over config.t_ego.
std::vector<std::vector<Vec2>> PlanningFrameObstacles(
    const Scene& scene, const AnnotationConfig& config = {});

}  // namespace corridor

#endif  // CORRIDOR_ANNOTATION_H_
