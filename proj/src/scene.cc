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

#include "corridor/scene.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "corridor/dynamics.h"
#include "corridor/error.h"
#include "corridor/rng.h"

namespace corridor {

namespace {

bool AllFinite(std::span<const Vec2> pts) {
  return std::all_of(pts.begin(), pts.end(),
                     [](const Vec2& p) { return p.allFinite(); });
}

}  // namespace

std::optional<Pose2> AgentTrack::PoseAt(double t) const {
  if (poses.empty() || t < poses.front().t || t > poses.back().t) {
    return std::nullopt;
  }
  auto hi = std::lower_bound(
      poses.begin(), poses.end(), t,
      [](const AgentPose& p, double time) { return p.t < time; });
  if (hi->t == t) return Pose2{hi->px, hi->py, hi->theta};
  auto lo = hi - 1;
  const double s = (t - lo->t) / (hi->t - lo->t);
  return Pose2{lo->px + s * (hi->px - lo->px), lo->py + s * (hi->py - lo->py),
               WrapAngle(lo->theta + s * WrapAngle(hi->theta - lo->theta))};
}

std::array<Vec2, 4> AgentTrack::BoxVertices(const Pose2& pose) const {
  return RectVertices({pose.x, pose.y, pose.theta, 2.0 * half_length,
                       2.0 * half_width});
}

void Scene::Validate() const {
  if (!(dt > 0.0)) throw InvalidInput("scene dt must be positive");
  if (horizon < 1) throw InvalidInput("scene horizon must be at least 1");
  if (!(wheelbase > 0.0)) throw InvalidInput("wheelbase must be positive");
  ValidateFootprint(footprint);
  if (ego_log.empty()) throw InvalidInput("ego log is empty");
  bool has_zero = false;
  for (size_t i = 0; i < ego_log.size(); ++i) {
    const EgoSample& s = ego_log[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.px) || !std::isfinite(s.py) ||
        !std::isfinite(s.theta) || !std::isfinite(s.v)) {
      throw InvalidInput("ego log entries must be finite");
    }
    if (i > 0 && !(s.t > ego_log[i - 1].t)) {
      throw InvalidInput("ego log timestamps must be strictly increasing");
    }
    if (std::abs(s.t) < 1e-9) has_zero = true;
  }
  if (!has_zero) throw InvalidInput("ego log must contain t = 0");
  if (ego_log.back().t < horizon * dt - 1e-9) {
    throw InvalidInput("ego log must cover the planning horizon");
  }
  for (const AgentTrack& a : agents) {
    if (!(a.half_length > 0.0) || !(a.half_width > 0.0)) {
      throw InvalidInput("agent dimensions must be positive");
    }
    for (size_t i = 1; i < a.poses.size(); ++i) {
      if (!(a.poses[i].t > a.poses[i - 1].t)) {
        throw InvalidInput("agent pose timestamps must be strictly increasing");
      }
    }
  }
  for (const auto* group : {&curbs, &lanes}) {
    for (const Polyline& pl : *group) {
      if (!AllFinite(pl)) throw InvalidInput("polyline points must be finite");
    }
  }
}

EgoSample Scene::EgoAt(double t) const {
  if (ego_log.empty() || t < ego_log.front().t - 1e-12 ||
      t > ego_log.back().t + 1e-12) {
    throw InvalidInput("time " + std::to_string(t) + " outside the ego log");
  }
  auto hi = std::lower_bound(
      ego_log.begin(), ego_log.end(), t,
      [](const EgoSample& s, double time) { return s.t < time; });
  if (hi == ego_log.end()) return ego_log.back();
  if (hi->t == t || hi == ego_log.begin()) return *hi;
  auto lo = hi - 1;
  const double s = (t - lo->t) / (hi->t - lo->t);
  return {t, lo->px + s * (hi->px - lo->px), lo->py + s * (hi->py - lo->py),
          lo->theta + s * WrapAngle(hi->theta - lo->theta),
          lo->v + s * (hi->v - lo->v)};
}

Pose2 Scene::EgoPoseAt(double t) const {
  const EgoSample s = EgoAt(t);
  return {s.px, s.py, s.theta};
}

void ObstaclePointSet::Append(std::span<const Vec2> pts, ObstacleSource tag) {
  points.insert(points.end(), pts.begin(), pts.end());
  tags.insert(tags.end(), pts.size(), tag);
}

std::vector<Vec2> ObstaclePointSet::PointsWithTag(ObstacleSource tag) const {
  std::vector<Vec2> out;
  for (size_t i = 0; i < points.size(); ++i) {
    if (tags[i] == tag) out.push_back(points[i]);
  }
  return out;
}

std::vector<Vec2> SampleContour(std::span<const Vec2> polyline, bool closed,
                                double delta_obs) {
  if (polyline.empty()) throw InvalidInput("cannot sample an empty polyline");
  if (!(delta_obs > 0.0)) throw InvalidInput("delta_obs must be positive");
  std::vector<Vec2> out;
  out.push_back(polyline[0]);
  const size_t n = polyline.size();
  const size_t segments = closed && n > 2 ? n : n - 1;
  for (size_t i = 0; i < segments; ++i) {
    const Vec2& a = polyline[i];
    const Vec2& b = polyline[(i + 1) % n];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const int pieces =
        std::max(1, static_cast<int>(std::ceil(len / delta_obs - 1e-9)));
    const bool last_closes = closed && n > 2 && i + 1 == segments;
    for (int k = 1; k <= pieces; ++k) {
      if (k == pieces && last_closes) break;
      out.push_back(k == pieces ? b : Vec2(a + (b - a) * (double(k) / pieces)));
    }
  }
  return out;
}

std::vector<Polyline> LaneFilter(const Scene& scene, TimeInterval t_ego,
                                 double margin) {
  if (scene.ego_log.empty()) return scene.lanes;
  const double begin = std::max(t_ego.begin, scene.ego_log.front().t);
  const double end = std::min(t_ego.end, scene.ego_log.back().t);
  Polyline path;
  if (begin <= end) {
    const EgoSample first = scene.EgoAt(begin);
    path.emplace_back(first.px, first.py);
    for (const EgoSample& s : scene.ego_log) {
      if (s.t > begin && s.t < end) path.emplace_back(s.px, s.py);
    }
    const EgoSample last = scene.EgoAt(end);
    path.emplace_back(last.px, last.py);
  }
  std::vector<Polyline> retained;
  for (const Polyline& lane : scene.lanes) {
    if (path.empty() || PolylineDistance(lane, path) > margin + 1e-9) {
      retained.push_back(lane);
    }
  }
  return retained;
}

ObstaclePointSet ObstaclePointsAt(const Scene& scene, double t,
                                  double delta_obs,
                                  std::span<const Polyline> retained_lanes) {
  ObstaclePointSet set;
  for (const AgentTrack& agent : scene.agents) {
    const auto pose = agent.PoseAt(t);
    if (!pose) continue;
    const auto box = agent.BoxVertices(*pose);
    set.Append(SampleContour(box, /*closed=*/true, delta_obs),
               ObstacleSource::kAgent);
  }
  for (const Polyline& curb : scene.curbs) {
    if (curb.empty()) continue;
    set.Append(SampleContour(curb, false, delta_obs), ObstacleSource::kCurb);
  }
  for (const Polyline& lane : retained_lanes) {
    if (lane.empty()) continue;
    set.Append(SampleContour(lane, false, delta_obs), ObstacleSource::kLane);
  }
  return set;
}

Vec2 ToLocalFrame(const Vec2& p, const Pose2& pose) {
  return Rotate(p - Vec2(pose.x, pose.y), -pose.theta);
}

Vec2 ToWorldFrame(const Vec2& p, const Pose2& pose) {
  return Rotate(p, pose.theta) + Vec2(pose.x, pose.y);
}

std::vector<Vec2> ToLocalFrame(std::span<const Vec2> points,
                               const Pose2& pose) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const Vec2& p : points) out.push_back(ToLocalFrame(p, pose));
  return out;
}

std::vector<Vec2> ToWorldFrame(std::span<const Vec2> points,
                               const Pose2& pose) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const Vec2& p : points) out.push_back(ToWorldFrame(p, pose));
  return out;
}

Pose2 ToLocalFrame(const Pose2& p, const Pose2& pose) {
  const Vec2 q = ToLocalFrame(Vec2(p.x, p.y), pose);
  return {q.x(), q.y(), p.theta - pose.theta};
}

Pose2 ToWorldFrame(const Pose2& p, const Pose2& pose) {
  const Vec2 q = ToWorldFrame(Vec2(p.x, p.y), pose);
  return {q.x(), q.y(), p.theta + pose.theta};
}

SceneKind ParseSceneKind(std::string_view name) {
  if (name == "straight") return SceneKind::kStraight;
  if (name == "turn") return SceneKind::kTurn;
  if (name == "cut-in") return SceneKind::kCutIn;
  if (name == "narrow") return SceneKind::kNarrow;
  throw InvalidInput("unknown scene kind: " + std::string(name));
}

std::string_view SceneKindName(SceneKind kind) {
  switch (kind) {
    case SceneKind::kStraight:
      return "straight";
    case SceneKind::kTurn:
      return "turn";
    case SceneKind::kCutIn:
      return "cut-in";
    case SceneKind::kNarrow:
      return "narrow";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Synthetic scenes.

namespace {

constexpr double kLaneWidth = 3.5;
constexpr double kShoulder = 0.3;
constexpr double kLogStart = -5.0;
constexpr double kLogEnd = 5.0;

// Arc-length parameterized polyline.
class Path {
 public:
  explicit Path(Polyline pts) : pts_(std::move(pts)) {
    s_.push_back(0.0);
    for (size_t i = 1; i < pts_.size(); ++i) {
      s_.push_back(s_.back() + (pts_[i] - pts_[i - 1]).norm());
    }
  }

  Pose2 At(double s) const {
    s = std::clamp(s, 0.0, s_.back());
    size_t i = std::upper_bound(s_.begin(), s_.end(), s) - s_.begin();
    i = std::clamp<size_t>(i, 1, pts_.size() - 1);
    const Vec2 d = pts_[i] - pts_[i - 1];
    const double len = s_[i] - s_[i - 1];
    const double f = len > 0.0 ? (s - s_[i - 1]) / len : 0.0;
    const Vec2 p = pts_[i - 1] + f * d;
    return {p.x(), p.y(), std::atan2(d.y(), d.x())};
  }

  // Arc length of the vertex closest to p.
  double Project(const Vec2& p) const {
    double best = 0.0, best_d = 1e300;
    for (size_t i = 0; i < pts_.size(); ++i) {
      const double d = (pts_[i] - p).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = s_[i];
      }
    }
    return best;
  }

 private:
  Polyline pts_;
  std::vector<double> s_;
};

struct EgoPlan {
  double v0;
  double accel;
  double delta;
};

struct Road {
  std::vector<EgoState> centerline;  // dense ego-driven path
  std::vector<EgoSample> log;
};

Road DriveEgo(const EgoPlan& plan, double dt, double wheelbase) {
  // Pre-roll from -15 s and post-roll to +20 s give the road room on both
  // sides; acceleration is applied only inside the logged window.
  Road road;
  EgoState x{0.0, 0.0, 0.0, plan.v0 - plan.accel * (-kLogStart)};
  x.v = std::max(x.v, 0.5);
  const int pre = static_cast<int>(std::lround(10.0 / dt));
  const int logged = static_cast<int>(std::lround((kLogEnd - kLogStart) / dt));
  const int post = static_cast<int>(std::lround(15.0 / dt));
  const Control coast{0.0, plan.delta};
  for (int k = 0; k < pre; ++k) {
    road.centerline.push_back(x);
    x = Step(x, coast, dt, wheelbase);
  }
  for (int k = 0; k <= logged; ++k) {
    road.centerline.push_back(x);
    road.log.push_back({kLogStart + k * dt, x.px, x.py, x.theta, x.v});
    if (k < logged) x = Step(x, {plan.accel, plan.delta}, dt, wheelbase);
  }
  for (int k = 0; k < post; ++k) {
    x = Step(x, coast, dt, wheelbase);
    road.centerline.push_back(x);
  }
  return road;
}

Polyline Offset(const std::vector<EgoState>& centerline, double lateral) {
  Polyline out;
  out.reserve(centerline.size());
  for (const EgoState& s : centerline) {
    out.emplace_back(s.px - lateral * std::sin(s.theta),
                     s.py + lateral * std::cos(s.theta));
  }
  return out;
}

// Agent driving along a lane offset with an optional lateral maneuver.
struct AgentSpec {
  double lateral_start;
  double lateral_end;
  double maneuver_start;  // time the lateral move begins
  double maneuver_duration;
  double gap;             // arc length ahead of the ego at t = 0
  double speed;
  double half_length;
  double half_width;
};

AgentTrack MakeAgent(const std::string& id, const AgentSpec& spec,
                     const Path& center, double ego_s0, double dt) {
  AgentTrack track;
  track.id = id;
  track.half_length = spec.half_length;
  track.half_width = spec.half_width;
  const int samples = static_cast<int>(std::lround((kLogEnd - kLogStart) / dt));
  for (int k = 0; k <= samples; ++k) {
    const double t = kLogStart + k * dt;
    const double s = ego_s0 + spec.gap + spec.speed * t;
    double f = 0.0, rate = 0.0;
    if (spec.maneuver_duration > 0.0) {
      f = std::clamp((t - spec.maneuver_start) / spec.maneuver_duration, 0.0,
                     1.0);
      if (f > 0.0 && f < 1.0) {
        rate = (spec.lateral_end - spec.lateral_start) / spec.maneuver_duration;
      }
    }
    const double lateral =
        spec.lateral_start + f * (spec.lateral_end - spec.lateral_start);
    const Pose2 c = center.At(s);
    const Vec2 p = Vec2(c.x, c.y) + Rotate(Vec2(0.0, lateral), c.theta);
    const double heading = c.theta + std::atan2(rate, spec.speed);
    track.poses.push_back({t, p.x(), p.y(), WrapAngle(heading)});
  }
  return track;
}

bool AgentsClearOfEgo(const Scene& scene) {
  for (const EgoSample& e : scene.ego_log) {
    const OrientedRect ego{e.px, e.py, e.theta, 2.0 * scene.footprint.half_length,
                           2.0 * scene.footprint.half_width};
    for (const AgentTrack& a : scene.agents) {
      const auto pose = a.PoseAt(e.t);
      if (!pose) continue;
      const OrientedRect box{pose->x, pose->y, pose->theta, 2.0 * a.half_length,
                             2.0 * a.half_width};
      if (RectsOverlap(ego, box)) return false;
    }
  }
  return true;
}

void ApplyWorldTransform(Scene& scene, const Pose2& tf) {
  for (EgoSample& s : scene.ego_log) {
    const Vec2 p = ToWorldFrame(Vec2(s.px, s.py), tf);
    s.px = p.x();
    s.py = p.y();
    s.theta += tf.theta;
  }
  for (AgentTrack& a : scene.agents) {
    for (AgentPose& pose : a.poses) {
      const Vec2 p = ToWorldFrame(Vec2(pose.px, pose.py), tf);
      pose.px = p.x();
      pose.py = p.y();
      pose.theta = WrapAngle(pose.theta + tf.theta);
    }
  }
  for (auto* group : {&scene.curbs, &scene.lanes}) {
    for (Polyline& pl : *group) pl = ToWorldFrame(pl, tf);
  }
}

Scene TryGenScene(Rng& rng, SceneKind kind) {
  Scene scene;
  EgoPlan plan{0.0, 0.0, 0.0};
  int left_lanes = 0;
  int right_lanes = 0;
  double curb_left = 0.0;
  double curb_right = 0.0;
  switch (kind) {
    case SceneKind::kStraight:
      plan = {rng.Uniform(6.0, 12.0), rng.Uniform(-0.3, 0.3), 0.0};
      left_lanes = rng.Int(0, 2);
      right_lanes = rng.Int(0, 1);
      break;
    case SceneKind::kTurn: {
      const double radius = rng.Uniform(25.0, 50.0);
      const double sign = rng.Coin(0.5) ? 1.0 : -1.0;
      plan = {rng.Uniform(4.0, 8.0), 0.0,
              sign * std::atan(scene.wheelbase / radius)};
      left_lanes = rng.Int(0, 1);
      break;
    }
    case SceneKind::kCutIn:
      plan = {rng.Uniform(6.0, 11.0), rng.Uniform(-0.2, 0.2), 0.0};
      left_lanes = rng.Int(1, 2);
      right_lanes = rng.Int(0, 1);
      break;
    case SceneKind::kNarrow:
      plan = {rng.Uniform(3.0, 6.0), 0.0, 0.0};
      break;
  }
  const Road road = DriveEgo(plan, scene.dt, scene.wheelbase);
  scene.ego_log = road.log;
  if (kind == SceneKind::kNarrow) {
    curb_left = rng.Uniform(1.35, 1.7);
    curb_right = rng.Uniform(1.35, 1.7);
  } else {
    curb_left = 0.5 * kLaneWidth + kLaneWidth * left_lanes + kShoulder;
    curb_right = 0.5 * kLaneWidth + kLaneWidth * right_lanes + kShoulder;
    for (int k = 0; k < left_lanes; ++k) {
      scene.lanes.push_back(
          Offset(road.centerline, 0.5 * kLaneWidth + kLaneWidth * k));
    }
    for (int k = 0; k < right_lanes; ++k) {
      scene.lanes.push_back(
          Offset(road.centerline, -(0.5 * kLaneWidth + kLaneWidth * k)));
    }
  }
  scene.curbs.push_back(Offset(road.centerline, curb_left));
  scene.curbs.push_back(Offset(road.centerline, -curb_right));

  Polyline center_pts;
  for (const EgoState& s : road.centerline) center_pts.emplace_back(s.px, s.py);
  const Path center(center_pts);
  const EgoSample ego0 = scene.EgoAt(0.0);
  const double ego_s0 = center.Project(Vec2(ego0.px, ego0.py));
  const double v_end = plan.v0 + plan.accel * kLogEnd;
  const auto car = [&rng](AgentSpec spec) {
    spec.half_length = rng.Uniform(2.0, 2.5);
    spec.half_width = rng.Uniform(0.85, 1.0);
    return spec;
  };

  int next_id = 0;
  const auto add = [&](const AgentSpec& spec) {
    scene.agents.push_back(MakeAgent("agent-" + std::to_string(next_id++),
                                     spec, center, ego_s0, scene.dt));
  };

  if (kind == SceneKind::kCutIn) {
    const double t_c = rng.Uniform(-1.5, 1.0);
    const double speed = std::max(plan.v0, v_end) + rng.Uniform(0.5, 2.0);
    const double gap_at_tc = rng.Uniform(8.0, 14.0);
    AgentSpec cut{kLaneWidth, 0.0, t_c, rng.Uniform(2.0, 3.0), 0.0, speed, 0, 0};
    // Ego arc length relative to t = 0 is about v0 * t_c at the maneuver.
    cut.gap = gap_at_tc + plan.v0 * t_c - speed * t_c;
    add(car(cut));
  } else if (rng.Coin(0.7)) {
    AgentSpec lead{0.0, 0.0, 0.0, 0.0, rng.Uniform(15.0, 28.0),
                   std::max(plan.v0, v_end) + rng.Uniform(0.0, 2.0), 0, 0};
    add(car(lead));
  }
  // Traffic that stays in its lane. The cut-in lane itself is kept free.
  for (int k = 0; k < left_lanes; ++k) {
    if (kind == SceneKind::kCutIn && k == 0) continue;
    const int count = rng.Int(0, 2);
    for (int j = 0; j < count; ++j) {
      add(car({kLaneWidth * (k + 1), kLaneWidth * (k + 1), 0.0, 0.0,
               rng.Uniform(-30.0, 40.0), plan.v0 * rng.Uniform(0.8, 1.2), 0,
               0}));
    }
  }
  for (int k = 0; k < right_lanes; ++k) {
    const int count = rng.Int(0, 2);
    for (int j = 0; j < count; ++j) {
      add(car({-kLaneWidth * (k + 1), -kLaneWidth * (k + 1), 0.0, 0.0,
               rng.Uniform(-30.0, 40.0), plan.v0 * rng.Uniform(0.8, 1.2), 0,
               0}));
    }
  }
  ApplyWorldTransform(scene, {rng.Uniform(-100.0, 100.0),
                              rng.Uniform(-100.0, 100.0),
                              rng.Uniform(-kPi, kPi)});
  return scene;
}

}  // namespace

Scene GenScene(uint64_t seed, SceneKind kind) {
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(kind));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Scene scene = TryGenScene(rng, kind);
    if (AgentsClearOfEgo(scene)) return scene;
  }
  throw InvalidInput("could not generate a collision-free scene");
}

}  // namespace corridor
