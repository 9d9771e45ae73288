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

#include "corridor/render.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

namespace corridor {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

const char* ColorFor(int t) { return kPalette[(t - 1) % 8]; }

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

class Canvas {
 public:
  Canvas(const Vec2& lo, const Vec2& hi, double scale)
      : lo_(lo), hi_(hi), scale_(scale) {}

  // SVG y grows downward.
  std::string X(const Vec2& p) const { return Fmt((p.x() - lo_.x()) * scale_); }
  std::string Y(const Vec2& p) const { return Fmt((hi_.y() - p.y()) * scale_); }
  std::string Points(std::span<const Vec2> pts) const {
    std::string s;
    for (const Vec2& p : pts) s += X(p) + "," + Y(p) + " ";
    if (!s.empty()) s.pop_back();
    return s;
  }
  double width() const { return (hi_.x() - lo_.x()) * scale_; }
  double height() const { return (hi_.y() - lo_.y()) * scale_; }

 private:
  Vec2 lo_, hi_;
  double scale_;
};

}  // namespace

std::string RenderSvg(const Scene& scene, const Corridor& corridor,
                      const Trajectory& reference, const Trajectory& optimized,
                      const RenderOptions& options) {
  const Pose2 origin = scene.PlanningOrigin();
  std::vector<Polyline> curbs, lanes;
  for (const Polyline& c : scene.curbs) curbs.push_back(ToLocalFrame(c, origin));
  for (const Polyline& l : scene.lanes) lanes.push_back(ToLocalFrame(l, origin));

  // The view covers the corridor, trajectories and the ego's neighborhood.
  Vec2 lo(-10.0, -10.0), hi(10.0, 10.0);
  const auto grow = [&](const Vec2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const OrientedRect& r : corridor.rects) {
    for (const Vec2& v : RectVertices(r)) grow(v);
  }
  for (const EgoState& x : reference) grow({x.px, x.py});
  for (const EgoState& x : optimized) grow({x.px, x.py});
  lo -= Vec2::Constant(options.margin);
  hi += Vec2::Constant(options.margin);
  const Canvas cv(lo, hi, options.pixels_per_meter);
  const auto in_view = [&](const Vec2& p) {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  };
  const auto clip = [&](const Polyline& pl) {
    Polyline out;
    for (const Vec2& p : pl) {
      if (in_view(p)) out.push_back(p);
    }
    return out;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fmt(cv.width())
      << "\" height=\"" << Fmt(cv.height()) << "\" viewBox=\"0 0 "
      << Fmt(cv.width()) << " " << Fmt(cv.height()) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const Polyline& l : lanes) {
    svg << "<polyline points=\"" << cv.Points(clip(l))
        << "\" fill=\"none\" stroke=\"#aaaaaa\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (const Polyline& c : curbs) {
    svg << "<polyline points=\"" << cv.Points(clip(c))
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  const int n = scene.horizon;
  for (int t = 1; t <= n; ++t) {
    for (const AgentTrack& a : scene.agents) {
      const auto pose = a.PoseAt(t * scene.dt);
      if (!pose) continue;
      const Pose2 p = ToLocalFrame(*pose, origin);
      const auto v = a.BoxVertices(p);
      svg << "<polygon points=\"" << cv.Points(v) << "\" fill=\"" << ColorFor(t)
          << "\" fill-opacity=\"0.25\" stroke=\"" << ColorFor(t) << "\"/>\n";
    }
  }
  for (size_t i = 0; i < corridor.rects.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const auto v = RectVertices(corridor.rects[i]);
    svg << "<polygon points=\"" << cv.Points(v) << "\" fill=\"" << ColorFor(t)
        << "\" fill-opacity=\"0.08\" stroke=\"" << ColorFor(t)
        << "\" stroke-width=\"1.5\"/>\n";
  }
  const auto draw_traj = [&](const Trajectory& traj, const char* dash) {
    if (traj.empty()) return;
    Polyline pts{Vec2::Zero()};
    for (const EgoState& x : traj) pts.emplace_back(x.px, x.py);
    svg << "<polyline points=\"" << cv.Points(pts)
        << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"" << dash
        << "\"/>\n";
    for (size_t i = 0; i < traj.size(); ++i) {
      const Vec2 p(traj[i].px, traj[i].py);
      svg << "<circle cx=\"" << cv.X(p) << "\" cy=\"" << cv.Y(p)
          << "\" r=\"3\" fill=\"" << ColorFor(static_cast<int>(i) + 1)
          << "\"/>\n";
    }
  };
  draw_traj(reference, "4,3");
  draw_traj(optimized, "none");
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace corridor
