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

#ifndef CORRIDOR_SCENE_H_
#define CORRIDOR_SCENE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corridor/geometry.h"

namespace corridor {

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct EgoSample {
  double t = 0.0;
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double v = 0.0;
};

struct AgentPose {
  double t = 0.0;
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
};

struct AgentTrack {
  std::string id;
  double half_length = 2.0;
  double half_width = 0.9;
  std::vector<AgentPose> poses;

  // Linear in position, shortest arc in heading. nullopt outside the track.
  std::optional<Pose2> PoseAt(double t) const;
  std::array<Vec2, 4> BoxVertices(const Pose2& pose) const;
};

// Ground-truth world for one driving scenario, world frame.
struct Scene {
  double dt = 0.5;
  int horizon = 6;
  double wheelbase = 2.7;
  std::vector<EgoSample> ego_log;
  std::vector<AgentTrack> agents;
  std::vector<Polyline> curbs;
  std::vector<Polyline> lanes;
  EgoFootprint footprint;

  // Throws InvalidInput when an invariant is broken.
  void Validate() const;

  // Interpolated ego sample. Throws InvalidInput outside the log.
  EgoSample EgoAt(double t) const;
  Pose2 EgoPoseAt(double t) const;

  // Ego pose at t = 0; the origin of the planning frame.
  Pose2 PlanningOrigin() const { return EgoPoseAt(0.0); }
};

inline constexpr double kLaneOverlapMargin = 0.25;

enum class ObstacleSource { kAgent, kCurb, kLane };

struct ObstaclePointSet {
  std::vector<Vec2> points;
  std::vector<ObstacleSource> tags;

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void Append(std::span<const Vec2> pts, ObstacleSource tag);
  std::vector<Vec2> PointsWithTag(ObstacleSource tag) const;
};

// Samples a polyline (or closed polygon) so that every original vertex is kept
// and consecutive samples along a segment are at most delta_obs apart.
std::vector<Vec2> SampleContour(std::span<const Vec2> polyline, bool closed,
                                double delta_obs);

struct TimeInterval {
  double begin = -5.0;
  double end = 5.0;
};

// Lane dividers that neither cross the ego path over t_ego nor come within
// margin of it. The interval is clipped to the ego log.
std::vector<Polyline> LaneFilter(const Scene& scene, TimeInterval t_ego,
                                 double margin = kLaneOverlapMargin);

// Sampled agent boxes at time t, curbs and the given lanes; world frame.
ObstaclePointSet ObstaclePointsAt(const Scene& scene, double t,
                                  double delta_obs,
                                  std::span<const Polyline> retained_lanes);

// p_local = R(-theta) (p_world - (x, y)).
Vec2 ToLocalFrame(const Vec2& p, const Pose2& pose);
Vec2 ToWorldFrame(const Vec2& p, const Pose2& pose);
std::vector<Vec2> ToLocalFrame(std::span<const Vec2> points, const Pose2& pose);
std::vector<Vec2> ToWorldFrame(std::span<const Vec2> points, const Pose2& pose);
Pose2 ToLocalFrame(const Pose2& p, const Pose2& pose);
Pose2 ToWorldFrame(const Pose2& p, const Pose2& pose);

enum class SceneKind { kStraight, kTurn, kCutIn, kNarrow };

// Throws InvalidInput for unknown names. Accepts "straight", "turn",
// "cut-in" and "narrow".
SceneKind ParseSceneKind(std::string_view name);
std::string_view SceneKindName(SceneKind kind);

// Deterministic synthetic scenario. The ego log spans [-5 s, +5 s] at dt and
// follows the forward-Euler bicycle model exactly.
Scene GenScene(uint64_t seed, SceneKind kind);

}  // namespace corridor

#endif  // CORRIDOR_SCENE_H_
