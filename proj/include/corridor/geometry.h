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

#ifndef CORRIDOR_GEOMETRY_H_
#define CORRIDOR_GEOMETRY_H_

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace corridor {

using Vec2 = Eigen::Vector2d;
using Polyline = std::vector<Vec2>;

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to (-pi, pi].
double WrapAngle(double angle);

// Rotates v counter-clockwise by theta.
Vec2 Rotate(const Vec2& v, double theta);

// Oriented rectangle. l and w are full extents along and across the heading.
struct OrientedRect {
  double cx = 0.0;
  double cy = 0.0;
  double theta = 0.0;
  double l = 1.0;
  double w = 1.0;

  Vec2 center() const { return {cx, cy}; }
};

// Builds a validated rectangle with theta wrapped to (-pi, pi].
// Throws InvalidInput for non-positive or non-finite extents.
OrientedRect MakeRect(double cx, double cy, double theta, double l, double w);
void ValidateRect(const OrientedRect& rect);

// Counter-clockwise vertices starting from front-left.
std::array<Vec2, 4> RectVertices(const OrientedRect& rect);

// Point-in-closed-rectangle test evaluated in the rectangle frame.
bool RectContains(const OrientedRect& rect, const Vec2& p, double tol = 0.0);

// One halfspace a . p <= b.
struct Halfspace {
  double ax = 0.0;
  double ay = 0.0;
  double b = 0.0;

  double Slack(const Vec2& p) const { return b - (ax * p.x() + ay * p.y()); }
};

enum HalfspaceIndex { kFront = 0, kRear = 1, kLeft = 2, kRight = 3 };

struct HalfspaceSet {
  std::vector<Halfspace> rows;

  bool Contains(const Vec2& p, double tol = 0.0) const;
};

// H-representation of a rectangle. Rows are ordered front, rear, left, right
// in the rectangle frame; every normal has unit length.
HalfspaceSet RectToHalfspaces(const OrientedRect& rect);

// Depth of p inside the rectangle: the distance to the nearest edge for
// interior points and 0 for points outside or on the boundary.
double InteriorDistance(const Vec2& p, const OrientedRect& rect);

// Half dimensions of the ego vehicle.
struct EgoFootprint {
  double half_length = 2.0;
  double half_width = 0.9;
};
void ValidateFootprint(const EgoFootprint& footprint);

// Body-frame footprint vertices: front-right, front-left, rear-left,
// rear-right.
std::array<Vec2, 4> FootprintVertices(const EgoFootprint& footprint);

// Linear constraint c_px * px + c_py * py + c_theta * theta <= b.
struct StateConstraintRow {
  double c_px = 0.0;
  double c_py = 0.0;
  double c_theta = 0.0;
  double b = 0.0;
};

// Keeps every footprint vertex p + R(theta) v inside the halfspaces, with the
// rotation expanded to first order around theta_nominal. Returns one row per
// (halfspace, vertex) pair, halfspace-major.
std::vector<StateConstraintRow> FootprintConstraintRows(
    const HalfspaceSet& halfspaces, const EgoFootprint& footprint,
    double theta_nominal);

// Separating-axis test; touching boundaries count as overlap.
bool RectsOverlap(const OrientedRect& a, const OrientedRect& b);

double PointSegmentDistance(const Vec2& p, const Vec2& a, const Vec2& b);
double PointPolylineDistance(const Vec2& p, std::span<const Vec2> polyline);

// True when closed segments [a0, a1] and [b0, b1] share at least one point.
bool SegmentsIntersect(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                       const Vec2& b1);

// Minimum distance between two polylines, 0 if they cross.
double PolylineDistance(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace corridor

#endif  // CORRIDOR_GEOMETRY_H_
