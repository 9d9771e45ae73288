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

#include "corridor/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corridor/error.h"

namespace corridor {

void BevGridSpec::Validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidInput("grid resolution must be positive");
  }
  if (!(extent_x > 0.0) || !(extent_y > 0.0) || !std::isfinite(extent_x) ||
      !std::isfinite(extent_y)) {
    throw InvalidInput("grid extent must be positive");
  }
}

int BevGridSpec::cols() const {
  return std::max(1, static_cast<int>(std::lround(extent_x / resolution)));
}
int BevGridSpec::rows() const {
  return std::max(1, static_cast<int>(std::lround(extent_y / resolution)));
}

BevGrid::BevGrid(const BevGridSpec& s) : spec(s) {
  spec.Validate();
  cols = spec.cols();
  rows = spec.rows();
  cells.assign(static_cast<size_t>(cols) * rows, 0);
}

Vec2 BevGrid::CellCenter(int ix, int iy) const {
  return {spec.center.x() - 0.5 * spec.extent_x + (ix + 0.5) * spec.resolution,
          spec.center.y() - 0.5 * spec.extent_y + (iy + 0.5) * spec.resolution};
}

int BevGrid::Count() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), 1));
}

namespace {

struct CellRange {
  int x0, x1, y0, y1;  // inclusive; empty when x0 > x1 or y0 > y1
};

// Cells whose centers may fall in [lo, hi].
CellRange CellsInBox(const BevGridSpec& spec, int cols, int rows,
                     const Vec2& lo, const Vec2& hi) {
  const double ox = spec.center.x() - 0.5 * spec.extent_x;
  const double oy = spec.center.y() - 0.5 * spec.extent_y;
  const double r = spec.resolution;
  CellRange c;
  c.x0 = std::max(0, static_cast<int>(std::floor((lo.x() - ox) / r - 0.5)));
  c.x1 = std::min(cols - 1, static_cast<int>(std::ceil((hi.x() - ox) / r - 0.5)));
  c.y0 = std::max(0, static_cast<int>(std::floor((lo.y() - oy) / r - 0.5)));
  c.y1 = std::min(rows - 1, static_cast<int>(std::ceil((hi.y() - oy) / r - 0.5)));
  return c;
}

void BoundingBox(std::span<const Vec2> pts, Vec2& lo, Vec2& hi) {
  lo = hi = pts[0];
  for (const Vec2& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

bool StrictlyInside(const OrientedRect& rect, const Vec2& p) {
  const Vec2 local = Rotate(p - rect.center(), -rect.theta);
  return std::abs(local.x()) < 0.5 * rect.l && std::abs(local.y()) < 0.5 * rect.w;
}

}  // namespace

void RasterizeRect(BevGrid& grid, const OrientedRect& rect) {
  const auto v = RectVertices(rect);
  Vec2 lo, hi;
  BoundingBox(v, lo, hi);
  const CellRange c = CellsInBox(grid.spec, grid.cols, grid.rows, lo, hi);
  for (int iy = c.y0; iy <= c.y1; ++iy) {
    for (int ix = c.x0; ix <= c.x1; ++ix) {
      if (StrictlyInside(rect, grid.CellCenter(ix, iy))) {
        grid.cells[iy * grid.cols + ix] = 1;
      }
    }
  }
}

void RasterizePolyline(BevGrid& grid, std::span<const Vec2> polyline,
                       double stroke_width) {
  if (polyline.empty()) return;
  const double half = 0.5 * stroke_width;
  for (size_t i = 0; i < polyline.size(); ++i) {
    const Vec2& a = polyline[i];
    const Vec2& b = polyline[std::min(i + 1, polyline.size() - 1)];
    const Vec2 lo = a.cwiseMin(b) - Vec2::Constant(half);
    const Vec2 hi = a.cwiseMax(b) + Vec2::Constant(half);
    const CellRange c = CellsInBox(grid.spec, grid.cols, grid.rows, lo, hi);
    for (int iy = c.y0; iy <= c.y1; ++iy) {
      for (int ix = c.x0; ix <= c.x1; ++ix) {
        if (PointSegmentDistance(grid.CellCenter(ix, iy), a, b) <= half) {
          grid.cells[iy * grid.cols + ix] = 1;
        }
      }
    }
  }
}

BevGrid Rasterize(std::span<const OrientedRect> rects,
                  std::span<const Polyline> polylines,
                  const BevGridSpec& spec) {
  BevGrid grid(spec);
  for (const OrientedRect& r : rects) RasterizeRect(grid, r);
  for (const Polyline& pl : polylines) {
    RasterizePolyline(grid, pl, spec.resolution);
  }
  return grid;
}

bool CollisionFlags::AnyAgent() const {
  return std::find(agent.begin(), agent.end(), true) != agent.end();
}
bool CollisionFlags::AnyCurb() const {
  return std::find(curb.begin(), curb.end(), true) != curb.end();
}
int CollisionFlags::Count() const {
  return static_cast<int>(std::count(agent.begin(), agent.end(), true) +
                          std::count(curb.begin(), curb.end(), true));
}

CollisionFlags CollisionCheck(std::span<const EgoState> trajectory,
                              const Scene& scene, const BevGridSpec& spec) {
  spec.Validate();
  const Pose2 origin = scene.PlanningOrigin();
  const int cols = spec.cols();
  const int rows = spec.rows();
  const double half = 0.5 * spec.resolution;
  const double ox = spec.center.x() - 0.5 * spec.extent_x;
  const double oy = spec.center.y() - 0.5 * spec.extent_y;
  const auto center_of = [&](int ix, int iy) {
    return Vec2(ox + (ix + 0.5) * spec.resolution,
                oy + (iy + 0.5) * spec.resolution);
  };

  std::vector<Polyline> curbs;
  for (const Polyline& c : scene.curbs) curbs.push_back(ToLocalFrame(c, origin));

  CollisionFlags flags;
  flags.agent.assign(trajectory.size(), false);
  flags.curb.assign(trajectory.size(), false);
  for (size_t k = 0; k < trajectory.size(); ++k) {
    const EgoState& x = trajectory[k];
    const double t = static_cast<double>(k + 1) * scene.dt;
    const OrientedRect ego{x.px, x.py, x.theta, 2.0 * scene.footprint.half_length,
                           2.0 * scene.footprint.half_width};
    const auto ego_v = RectVertices(ego);
    Vec2 lo, hi;
    BoundingBox(ego_v, lo, hi);

    std::vector<OrientedRect> boxes;
    for (const AgentTrack& a : scene.agents) {
      const auto pose = a.PoseAt(t);
      if (!pose) continue;
      const Pose2 p = ToLocalFrame(*pose, origin);
      const OrientedRect box{p.x, p.y, p.theta, 2.0 * a.half_length,
                             2.0 * a.half_width};
      if (RectsOverlap(box, ego)) boxes.push_back(box);
    }
    std::vector<std::pair<Vec2, Vec2>> segments;
    for (const Polyline& c : curbs) {
      for (size_t i = 0; i + 1 < c.size(); ++i) {
        const Vec2 slo = c[i].cwiseMin(c[i + 1]) - Vec2::Constant(half);
        const Vec2 shi = c[i].cwiseMax(c[i + 1]) + Vec2::Constant(half);
        if ((slo.array() <= hi.array()).all() && (shi.array() >= lo.array()).all()) {
          segments.emplace_back(c[i], c[i + 1]);
        }
      }
      if (c.size() == 1) segments.emplace_back(c[0], c[0]);
    }
    if (boxes.empty() && segments.empty()) continue;

    const CellRange range = CellsInBox(spec, cols, rows, lo, hi);
    for (int iy = range.y0; iy <= range.y1; ++iy) {
      for (int ix = range.x0; ix <= range.x1; ++ix) {
        const Vec2 p = center_of(ix, iy);
        if (!StrictlyInside(ego, p)) continue;
        for (const OrientedRect& b : boxes) {
          if (StrictlyInside(b, p)) {
            flags.agent[k] = true;
            break;
          }
        }
        for (const auto& [a, b] : segments) {
          if (PointSegmentDistance(p, a, b) <= half) {
            flags.curb[k] = true;
            break;
          }
        }
      }
    }
  }
  return flags;
}

L2Result L2Metric(std::span<const EgoState> traj,
                  std::span<const EgoState> gt) {
  if (traj.size() != gt.size()) {
    throw InvalidInput("trajectory lengths differ");
  }
  L2Result out;
  for (size_t i = 0; i < traj.size(); ++i) {
    out.per_t.push_back(std::hypot(traj[i].px - gt[i].px, traj[i].py - gt[i].py));
  }
  if (!out.per_t.empty()) {
    out.avg = std::accumulate(out.per_t.begin(), out.per_t.end(), 0.0) /
              static_cast<double>(out.per_t.size());
  }
  return out;
}

TimingStats ComputeTimingStats(std::vector<double> samples) {
  TimingStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  s.median = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  // Nearest-rank percentile.
  const size_t rank = static_cast<size_t>(std::ceil(0.95 * n));
  s.p95 = samples[std::max<size_t>(rank, 1) - 1];
  s.max = samples.back();
  return s;
}

MetricsAccumulator::MetricsAccumulator(int horizon)
    : horizon_(horizon),
      agent_hits_(horizon, 0),
      curb_hits_(horizon, 0),
      l2_sum_(horizon, 0.0) {
  if (horizon < 1) throw InvalidInput("horizon must be positive");
}

void MetricsAccumulator::Add(const CollisionFlags& flags, const L2Result& l2,
                             double solve_time) {
  if (static_cast<int>(flags.agent.size()) != horizon_ ||
      static_cast<int>(flags.curb.size()) != horizon_ ||
      static_cast<int>(l2.per_t.size()) != horizon_) {
    throw InvalidInput("metrics sample does not match the horizon");
  }
  bool agent = false;
  bool curb = false;
  for (int t = 0; t < horizon_; ++t) {
    agent = agent || flags.agent[t];
    curb = curb || flags.curb[t];
    agent_hits_[t] += agent;
    curb_hits_[t] += curb;
    l2_sum_[t] += l2.per_t[t];
  }
  times_.push_back(solve_time);
  ++count_;
}

MetricsReport MetricsAccumulator::Report() const {
  MetricsReport r;
  r.count = count_;
  const double n = std::max(count_, 1);
  for (int t = 0; t < horizon_; ++t) {
    r.acr_per_t.push_back(agent_hits_[t] / n);
    r.ccr_per_t.push_back(curb_hits_[t] / n);
    r.l2_per_t.push_back(l2_sum_[t] / n);
  }
  int used = 0;
  for (int t : {2, 4, 6}) {
    if (t > horizon_) continue;
    r.acr_avg += r.acr_per_t[t - 1];
    r.ccr_avg += r.ccr_per_t[t - 1];
    ++used;
  }
  if (used > 0) {
    r.acr_avg /= used;
    r.ccr_avg /= used;
  }
  r.l2_avg = std::accumulate(r.l2_per_t.begin(), r.l2_per_t.end(), 0.0) /
             horizon_;
  r.solve_time = ComputeTimingStats(times_);
  return r;
}

}  // namespace corridor
