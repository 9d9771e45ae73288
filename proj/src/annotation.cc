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

#include "corridor/annotation.h"

#include <algorithm>
#include <cmath>

#include "corridor/error.h"

namespace corridor {

bool Corridor::AnyDegenerate() const {
  return std::any_of(degenerate.begin(), degenerate.end(),
                     [](bool d) { return d; });
}

Corridor MakeCorridor(std::vector<OrientedRect> rects) {
  Corridor c;
  c.degenerate.assign(rects.size(), false);
  c.rects = std::move(rects);
  return c;
}

namespace {

bool Better(const AxisRect& cand, double area, const AxisRect& best,
            double best_area) {
  if (area != best_area) return area > best_area;
  if (cand.x_min != best.x_min) return cand.x_min < best.x_min;
  return cand.y_min < best.y_min;
}

}  // namespace

AxisRect SolveMer(std::span<const Vec2> points, const MerBoundary& boundary,
                  const Vec2& anchor) {
  if (!(boundary.l_max > 0.0) || !(boundary.w_max > 0.0)) {
    throw InvalidInput("MER boundary must be positive");
  }
  const double bx0 = anchor.x() - 0.5 * boundary.l_max;
  const double bx1 = anchor.x() + 0.5 * boundary.l_max;
  const double by0 = anchor.y() - 0.5 * boundary.w_max;
  const double by1 = anchor.y() + 0.5 * boundary.w_max;

  // Only points in the open boundary box can be strictly interior to a
  // candidate rectangle.
  std::vector<Vec2> pts;
  pts.reserve(points.size());
  for (const Vec2& p : points) {
    if ((p - anchor).norm() <= kBlockedAnchorRadius) {
      throw BlockedAnchor("obstacle point coincides with the MER anchor");
    }
    if (p.x() > bx0 && p.x() < bx1 && p.y() > by0 && p.y() < by1) {
      pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });

  std::vector<double> left{bx0};
  std::vector<double> right{bx1};
  for (const Vec2& p : pts) {
    if (p.x() <= anchor.x()) left.push_back(p.x());
    if (p.x() >= anchor.x()) right.push_back(p.x());
  }
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  std::sort(right.begin(), right.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());

  AxisRect best{anchor.x(), anchor.x(), anchor.y(), anchor.y()};
  double best_area = -1.0;
  for (const double x_min : left) {
    // Points strictly right of x_min, consumed as x_max grows.
    size_t next = std::upper_bound(pts.begin(), pts.end(), x_min,
                                   [](double x, const Vec2& p) {
                                     return x < p.x();
                                   }) -
                  pts.begin();
    double y_lo = by0;
    double y_hi = by1;
    bool on_anchor_row = false;
    for (const double x_max : right) {
      while (next < pts.size() && pts[next].x() < x_max) {
        const double y = pts[next].y();
        if (y < anchor.y()) {
          y_lo = std::max(y_lo, y);
        } else if (y > anchor.y()) {
          y_hi = std::min(y_hi, y);
        } else {
          on_anchor_row = true;
        }
        ++next;
      }
      const auto consider = [&](double lo, double hi) {
        const AxisRect cand{x_min, x_max, lo, hi};
        const double area = cand.Area();
        if (Better(cand, area, best, best_area)) {
          best = cand;
          best_area = area;
        }
      };
      if (on_anchor_row) {
        // A point level with the anchor must sit on the top or bottom edge.
        consider(y_lo, anchor.y());
        consider(anchor.y(), y_hi);
      } else {
        consider(y_lo, y_hi);
      }
    }
  }
  return best;
}

namespace {

OrientedRect LocalToPlanning(const AxisRect& r, const Pose2& frame,
                             const Pose2& planning_origin) {
  const Vec2 center_local(0.5 * (r.x_min + r.x_max), 0.5 * (r.y_min + r.y_max));
  const Vec2 world = ToWorldFrame(center_local, frame);
  const Vec2 planning = ToLocalFrame(world, planning_origin);
  return MakeRect(planning.x(), planning.y(),
                  frame.theta - planning_origin.theta, r.x_max - r.x_min,
                  r.y_max - r.y_min);
}

AxisRect DegenerateBox() {
  const double h = 0.5 * kDegenerateSize;
  return {-h, h, -h, h};
}

}  // namespace

AnnotationResult AnnotateCorridor(const Scene& scene,
                                  const AnnotationConfig& config) {
  scene.Validate();
  const std::vector<Polyline> lanes = LaneFilter(scene, config.t_ego);
  const Pose2 origin = scene.PlanningOrigin();
  AnnotationResult result;
  for (int k = 1; k <= scene.horizon; ++k) {
    const double t = k * scene.dt;
    const Pose2 pose = scene.EgoPoseAt(t);
    const auto solve = [&](double delta) {
      const ObstaclePointSet obstacles =
          ObstaclePointsAt(scene, t, delta, lanes);
      const std::vector<Vec2> local = ToLocalFrame(obstacles.points, pose);
      return SolveMer(local, config.boundary, Vec2::Zero());
    };
    AxisRect box;
    bool degenerate = false;
    try {
      box = solve(config.delta_obs);
    } catch (const BlockedAnchor&) {
      result.resampled.push_back(k);
      try {
        box = solve(0.5 * config.delta_obs);
      } catch (const BlockedAnchor&) {
        result.failed.push_back(k);
        box = DegenerateBox();
        degenerate = true;
      }
    }
    result.corridor.rects.push_back(LocalToPlanning(box, pose, origin));
    result.corridor.degenerate.push_back(degenerate);
  }
  return result;
}

Corridor RefineCorridor(const Corridor& predicted,
                        std::span<const std::vector<Vec2>> perceived) {
  if (perceived.size() != predicted.size()) {
    throw InvalidInput("one perceived point set per corridor rectangle");
  }
  Corridor refined;
  for (size_t t = 0; t < predicted.size(); ++t) {
    const OrientedRect& rect = predicted.rects[t];
    ValidateRect(rect);
    const Pose2 frame{rect.cx, rect.cy, rect.theta};
    const std::vector<Vec2> local = ToLocalFrame(perceived[t], frame);
    AxisRect box;
    bool degenerate = false;
    try {
      box = SolveMer(local, {rect.l, rect.w}, Vec2::Zero());
    } catch (const BlockedAnchor&) {
      box = DegenerateBox();
      degenerate = true;
    }
    const Vec2 center = ToWorldFrame(
        Vec2(0.5 * (box.x_min + box.x_max), 0.5 * (box.y_min + box.y_max)),
        frame);
    refined.rects.push_back(MakeRect(center.x(), center.y(), rect.theta,
                                     box.x_max - box.x_min,
                                     box.y_max - box.y_min));
    const bool was_degenerate =
        t < predicted.degenerate.size() && predicted.degenerate[t];
    refined.degenerate.push_back(degenerate || was_degenerate);
  }
  return refined;
}

std::vector<std::vector<Vec2>> PlanningFrameObstacles(
    const Scene& scene, const AnnotationConfig& config) {
  const std::vector<Polyline> lanes = LaneFilter(scene, config.t_ego);
  const Pose2 origin = scene.PlanningOrigin();
  std::vector<std::vector<Vec2>> out;
  for (int k = 1; k <= scene.horizon; ++k) {
    const ObstaclePointSet set =
        ObstaclePointsAt(scene, k * scene.dt, config.delta_obs, lanes);
    out.push_back(ToLocalFrame(set.points, origin));
  }
  return out;
}

}  // namespace corridor
