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

#include "corridor/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corridor/error.h"

namespace corridor {

double WrapAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

Vec2 Rotate(const Vec2& v, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

void ValidateRect(const OrientedRect& rect) {
  if (!std::isfinite(rect.cx) || !std::isfinite(rect.cy) ||
      !std::isfinite(rect.theta)) {
    throw InvalidInput("rectangle pose must be finite");
  }
  if (!(rect.l > 0.0) || !(rect.w > 0.0) || !std::isfinite(rect.l) ||
      !std::isfinite(rect.w)) {
    throw InvalidInput("rectangle extents must be positive and finite");
  }
}

OrientedRect MakeRect(double cx, double cy, double theta, double l, double w) {
  OrientedRect rect{cx, cy, WrapAngle(theta), l, w};
  ValidateRect(rect);
  return rect;
}

std::array<Vec2, 4> RectVertices(const OrientedRect& rect) {
  const double hl = 0.5 * rect.l;
  const double hw = 0.5 * rect.w;
  const std::array<Vec2, 4> local = {Vec2(hl, hw), Vec2(-hl, hw),
                                     Vec2(-hl, -hw), Vec2(hl, -hw)};
  std::array<Vec2, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = rect.center() + Rotate(local[i], rect.theta);
  }
  return out;
}

bool RectContains(const OrientedRect& rect, const Vec2& p, double tol) {
  const Vec2 q = Rotate(p - rect.center(), -rect.theta);
  return std::abs(q.x()) <= 0.5 * rect.l + tol &&
         std::abs(q.y()) <= 0.5 * rect.w + tol;
}

bool HalfspaceSet::Contains(const Vec2& p, double tol) const {
  return std::all_of(rows.begin(), rows.end(), [&](const Halfspace& h) {
    return h.Slack(p) >= -tol;
  });
}

HalfspaceSet RectToHalfspaces(const OrientedRect& rect) {
  const Vec2 fwd(std::cos(rect.theta), std::sin(rect.theta));
  const Vec2 left(-fwd.y(), fwd.x());
  const Vec2 c = rect.center();
  const auto row = [&](const Vec2& n, double half_extent) {
    return Halfspace{n.x(), n.y(), n.dot(c) + half_extent};
  };
  HalfspaceSet set;
  set.rows = {row(fwd, 0.5 * rect.l), row(-fwd, 0.5 * rect.l),
              row(left, 0.5 * rect.w), row(-left, 0.5 * rect.w)};
  return set;
}

double InteriorDistance(const Vec2& p, const OrientedRect& rect) {
  const Vec2 q = Rotate(p - rect.center(), -rect.theta);
  const double hl = 0.5 * rect.l;
  const double hw = 0.5 * rect.w;
  const double d = std::min({hl - q.x(), hl + q.x(), hw - q.y(), hw + q.y()});
  return d > 0.0 ? d : 0.0;
}

void ValidateFootprint(const EgoFootprint& footprint) {
  if (!(footprint.half_length > 0.0) || !(footprint.half_width > 0.0) ||
      !std::isfinite(footprint.half_length) ||
      !std::isfinite(footprint.half_width)) {
    throw InvalidInput("footprint half dimensions must be positive");
  }
}

std::array<Vec2, 4> FootprintVertices(const EgoFootprint& footprint) {
  const double l = footprint.half_length;
  const double w = footprint.half_width;
  return {Vec2(l, -w), Vec2(l, w), Vec2(-l, w), Vec2(-l, -w)};
}

std::vector<StateConstraintRow> FootprintConstraintRows(
    const HalfspaceSet& halfspaces, const EgoFootprint& footprint,
    double theta_nominal) {
  const auto vertices = FootprintVertices(footprint);
  std::vector<StateConstraintRow> rows;
  rows.reserve(halfspaces.rows.size() * vertices.size());
  for (const Halfspace& h : halfspaces.rows) {
    const Vec2 a(h.ax, h.ay);
    for (const Vec2& v : vertices) {
      const Vec2 rotated = Rotate(v, theta_nominal);
      // d/dtheta R(theta) v = R(theta + pi/2) v
      const Vec2 derivative(-rotated.y(), rotated.x());
      const double k = a.dot(derivative);
      rows.push_back({h.ax, h.ay, k, h.b - a.dot(rotated) + k * theta_nominal});
    }
  }
  return rows;
}

bool RectsOverlap(const OrientedRect& a, const OrientedRect& b) {
  const auto va = RectVertices(a);
  const auto vb = RectVertices(b);
  for (const double theta : {a.theta, a.theta + 0.5 * kPi, b.theta,
                             b.theta + 0.5 * kPi}) {
    const Vec2 axis(std::cos(theta), std::sin(theta));
    double a_lo = std::numeric_limits<double>::infinity(), a_hi = -a_lo;
    double b_lo = a_lo, b_hi = -a_lo;
    for (int i = 0; i < 4; ++i) {
      const double pa = axis.dot(va[i]);
      const double pb = axis.dot(vb[i]);
      a_lo = std::min(a_lo, pa);
      a_hi = std::max(a_hi, pa);
      b_lo = std::min(b_lo, pb);
      b_hi = std::max(b_hi, pb);
    }
    if (a_hi < b_lo || b_hi < a_lo) return false;
  }
  return true;
}

double PointSegmentDistance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

double PointPolylineDistance(const Vec2& p, std::span<const Vec2> polyline) {
  if (polyline.empty()) return std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) return (p - polyline[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, PointSegmentDistance(p, polyline[i], polyline[i + 1]));
  }
  return best;
}

namespace {

double Cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool OnSegment(const Vec2& p, const Vec2& a, const Vec2& b) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

int Orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = Cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

}  // namespace

bool SegmentsIntersect(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                       const Vec2& b1) {
  const int o1 = Orientation(a0, a1, b0);
  const int o2 = Orientation(a0, a1, b1);
  const int o3 = Orientation(b0, b1, a0);
  const int o4 = Orientation(b0, b1, a1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && OnSegment(b0, a0, a1)) return true;
  if (o2 == 0 && OnSegment(b1, a0, a1)) return true;
  if (o3 == 0 && OnSegment(a0, b0, b1)) return true;
  if (o4 == 0 && OnSegment(a1, b0, b1)) return true;
  return false;
}

double PolylineDistance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : a) best = std::min(best, PointPolylineDistance(p, b));
  for (const Vec2& p : b) best = std::min(best, PointPolylineDistance(p, a));
  for (size_t i = 0; i + 1 < a.size(); ++i) {
    for (size_t j = 0; j + 1 < b.size(); ++j) {
      if (SegmentsIntersect(a[i], a[i + 1], b[j], b[j + 1])) return 0.0;
    }
  }
  return best;
}

}  // namespace corridor
