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

#include "corridor/losses.h"

#include <cmath>
#include <string>

#include "corridor/error.h"

namespace corridor {

CorridorEncoding EncodeCorridor(const Corridor& corridor) {
  CorridorEncoding e(kEncodingStride * corridor.size());
  for (size_t t = 0; t < corridor.size(); ++t) {
    const OrientedRect& r = corridor.rects[t];
    e.segment<kEncodingStride>(kEncodingStride * t) << r.cx, r.cy,
        std::cos(r.theta), std::sin(r.theta), r.l, r.w;
  }
  return e;
}

Corridor DecodeCorridor(const CorridorEncoding& encoding) {
  if (encoding.size() % kEncodingStride != 0) {
    throw InvalidInput("encoding length must be a multiple of 6");
  }
  std::vector<OrientedRect> rects;
  for (int t = 0; t < encoding.size() / kEncodingStride; ++t) {
    const auto e = encoding.segment<kEncodingStride>(kEncodingStride * t);
    rects.push_back({e(0), e(1), std::atan2(e(3), e(2)), e(4), e(5)});
  }
  return MakeCorridor(std::move(rects));
}

CurbPoints CurbPointsFromScene(const Scene& scene, double delta_obs) {
  const Pose2 origin = scene.PlanningOrigin();
  std::vector<Vec2> pts;
  for (const Polyline& curb : scene.curbs) {
    if (curb.empty()) continue;
    const auto sampled = SampleContour(curb, false, delta_obs);
    pts.insert(pts.end(), sampled.begin(), sampled.end());
  }
  CurbPoints out;
  out.per_t.assign(scene.horizon, ToLocalFrame(pts, origin));
  return out;
}

AgentVertices AgentVerticesFromScene(const Scene& scene) {
  const Pose2 origin = scene.PlanningOrigin();
  AgentVertices out;
  for (int k = 1; k <= scene.horizon; ++k) {
    std::vector<Vec2> pts;
    for (const AgentTrack& a : scene.agents) {
      const auto pose = a.PoseAt(k * scene.dt);
      if (!pose) continue;
      for (const Vec2& v : a.BoxVertices(*pose)) {
        pts.push_back(ToLocalFrame(v, origin));
      }
    }
    out.per_t.push_back(std::move(pts));
  }
  return out;
}

namespace {

LossValue MeanAbsolute(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  LossValue loss;
  const Eigen::Index n = a.size();
  loss.gradient = Eigen::VectorXd::Zero(n);
  if (n == 0) return loss;
  const Eigen::VectorXd diff = a - b;
  loss.value = diff.cwiseAbs().sum() / n;
  for (Eigen::Index i = 0; i < n; ++i) {
    loss.gradient(i) = diff(i) > 0.0 ? 1.0 / n : (diff(i) < 0.0 ? -1.0 / n : 0.0);
  }
  return loss;
}

void CheckEncoding(const CorridorEncoding& e) {
  if (e.size() % kEncodingStride != 0) {
    throw InvalidInput("encoding length must be a multiple of 6");
  }
}

LossValue SafetyLoss(const CorridorEncoding& corridor,
                     const std::vector<std::vector<Vec2>>& per_t) {
  CheckEncoding(corridor);
  const int n = corridor.size() / kEncodingStride;
  if (static_cast<int>(per_t.size()) != n) {
    throw InvalidInput("one point set per timestamp is required");
  }
  LossValue loss;
  loss.gradient = Eigen::VectorXd::Zero(corridor.size());
  for (int t = 0; t < n; ++t) {
    InteriorDepth deepest;
    for (const Vec2& p : per_t[t]) {
      const InteriorDepth d = InteriorDepthOf(p, corridor, t);
      // First index wins ties.
      if (d.value > deepest.value) deepest = d;
    }
    loss.value += deepest.value;
    loss.gradient.segment<kEncodingStride>(kEncodingStride * t) +=
        deepest.gradient;
  }
  return loss;
}

}  // namespace

LossValue CorridorLoss(const CorridorEncoding& pred,
                       const CorridorEncoding& gt) {
  CheckEncoding(pred);
  if (pred.size() != gt.size()) {
    throw InvalidInput("corridor lengths differ");
  }
  return MeanAbsolute(pred, gt);
}

LossValue CorridorLoss(const Corridor& pred, const Corridor& gt) {
  return CorridorLoss(EncodeCorridor(pred), EncodeCorridor(gt));
}

InteriorDepth InteriorDepthOf(const Vec2& p, const CorridorEncoding& corridor,
                              int t) {
  const auto e = corridor.segment<kEncodingStride>(kEncodingStride * t);
  const Vec2 raw(e(2), e(3));
  const double r = raw.norm();
  InteriorDepth out;
  if (!(r > 0.0)) return out;
  const Vec2 u = raw / r;
  const Vec2 n(-u.y(), u.x());
  const Vec2 d = p - Vec2(e(0), e(1));
  const double qx = u.dot(d);
  const double qy = n.dot(d);
  const double hl = 0.5 * e(4);
  const double hw = 0.5 * e(5);
  const double dist[4] = {hl - qx, hl + qx, hw - qy, hw + qy};
  int edge = 0;
  for (int k = 1; k < 4; ++k) {
    if (dist[k] < dist[edge]) edge = k;
  }
  if (!(dist[edge] > 0.0)) return out;
  out.value = dist[edge];
  out.edge = edge;

  // Gradient w.r.t. center, the unit heading u and the extents; u is then
  // mapped back through the normalization of (cos, sin).
  Vec2 d_center, d_u;
  const Vec2 d_perp(d.y(), -d.x());  // d(qy)/du
  switch (edge) {
    case kFront:
      d_center = u;
      d_u = -d;
      out.gradient(4) = 0.5;
      break;
    case kRear:
      d_center = -u;
      d_u = d;
      out.gradient(4) = 0.5;
      break;
    case kLeft:
      d_center = n;
      d_u = -d_perp;
      out.gradient(5) = 0.5;
      break;
    default:
      d_center = -n;
      d_u = d_perp;
      out.gradient(5) = 0.5;
      break;
  }
  const Eigen::Matrix2d normalize =
      (Eigen::Matrix2d::Identity() - u * u.transpose()) / r;
  const Vec2 d_raw = normalize * d_u;
  out.gradient(0) = d_center.x();
  out.gradient(1) = d_center.y();
  out.gradient(2) = d_raw.x();
  out.gradient(3) = d_raw.y();
  return out;
}

LossValue MapSafetyLoss(const CorridorEncoding& corridor,
                        const CurbPoints& curbs) {
  return SafetyLoss(corridor, curbs.per_t);
}

LossValue AgentSafetyLoss(const CorridorEncoding& corridor,
                          const AgentVertices& agents) {
  return SafetyLoss(corridor, agents.per_t);
}

LossValue AreaLoss(const CorridorEncoding& corridor, double alpha) {
  CheckEncoding(corridor);
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  LossValue loss;
  loss.gradient = Eigen::VectorXd::Zero(corridor.size());
  for (int t = 0; t < corridor.size() / kEncodingStride; ++t) {
    const double l = corridor(kEncodingStride * t + 4);
    const double w = corridor(kEncodingStride * t + 5);
    const double term = std::exp(-alpha * l * w);
    loss.value += term;
    loss.gradient(kEncodingStride * t + 4) = -alpha * w * term;
    loss.gradient(kEncodingStride * t + 5) = -alpha * l * term;
  }
  return loss;
}

LossValue ImitationLoss(std::span<const Vec2> traj, std::span<const Vec2> gt) {
  if (traj.size() != gt.size()) {
    throw InvalidInput("trajectory lengths differ: " +
                       std::to_string(traj.size()) + " vs " +
                       std::to_string(gt.size()));
  }
  Eigen::VectorXd a(2 * traj.size()), b(2 * gt.size());
  for (size_t i = 0; i < traj.size(); ++i) {
    a.segment<2>(2 * i) = traj[i];
    b.segment<2>(2 * i) = gt[i];
  }
  return MeanAbsolute(a, b);
}

}  // namespace corridor
