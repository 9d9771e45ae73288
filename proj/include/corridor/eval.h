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

#ifndef CORRIDOR_EVAL_H_
#define CORRIDOR_EVAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "corridor/dynamics.h"
#include "corridor/geometry.h"
#include "corridor/scene.h"

namespace corridor {

// Square cells of side `resolution` tiling an extent_x by extent_y window
// centered at `center`. Frame is whatever the caller rasterizes in.
struct BevGridSpec {
  double resolution = 0.1;
  double extent_x = 100.0;
  double extent_y = 100.0;
  Vec2 center = Vec2::Zero();

  void Validate() const;
  int cols() const;
  int rows() const;
};

struct BevGrid {
  BevGridSpec spec;
  int cols = 0;
  int rows = 0;
  std::vector<uint8_t> cells;  // row-major, row index along y

  explicit BevGrid(const BevGridSpec& s);
  bool at(int ix, int iy) const { return cells[iy * cols + ix] != 0; }
  Vec2 CellCenter(int ix, int iy) const;
  int Count() const;
};

// A cell is set when its center is strictly inside the rectangle. Shapes
// outside the window are clipped.
void RasterizeRect(BevGrid& grid, const OrientedRect& rect);
// Cells whose center is within stroke_width / 2 of the polyline.
void RasterizePolyline(BevGrid& grid, std::span<const Vec2> polyline,
                       double stroke_width);
// Polylines use a one-cell stroke.
BevGrid Rasterize(std::span<const OrientedRect> rects,
                  std::span<const Polyline> polylines, const BevGridSpec& spec);

// Per-timestamp collision flags for a planning-frame trajectory x_1..x_N.
struct CollisionFlags {
  std::vector<bool> agent;
  std::vector<bool> curb;

  bool AnyAgent() const;
  bool AnyCurb() const;
  // Number of (timestamp, obstacle kind) pairs in collision.
  int Count() const;
};

// Rasterizes the ego footprint at each step and intersects it with the
// agent boxes at that time and the curb strokes. The grid is centered at the
// planning origin.
CollisionFlags CollisionCheck(std::span<const EgoState> trajectory,
                              const Scene& scene, const BevGridSpec& spec = {});

struct L2Result {
  std::vector<double> per_t;
  double avg = 0.0;
};
// Euclidean position error per timestamp and its mean. Throws InvalidInput
// on a length mismatch.
L2Result L2Metric(std::span<const EgoState> traj, std::span<const EgoState> gt);

struct TimingStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};
TimingStats ComputeTimingStats(std::vector<double> samples);

struct MetricsReport {
  // Fraction of trajectories in collision at or before each timestamp.
  std::vector<double> acr_per_t;
  std::vector<double> ccr_per_t;
  // Mean of the per-timestamp rates at t = 2, 4, 6 (1 s, 2 s, 3 s).
  double acr_avg = 0.0;
  double ccr_avg = 0.0;
  std::vector<double> l2_per_t;
  double l2_avg = 0.0;
  TimingStats solve_time;
  int count = 0;
};

// Batch aggregation. Totals are sums, so the order of Add calls does not
// change the report.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(int horizon);
  void Add(const CollisionFlags& flags, const L2Result& l2, double solve_time);
  MetricsReport Report() const;

 private:
  int horizon_;
  int count_ = 0;
  std::vector<int> agent_hits_;
  std::vector<int> curb_hits_;
  std::vector<double> l2_sum_;
  std::vector<double> times_;
};

}  // namespace corridor

#endif  // CORRIDOR_EVAL_H_
