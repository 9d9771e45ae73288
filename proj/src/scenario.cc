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

#include "corridor/scenario.h"

#include <cmath>
#include <limits>

#include "corridor/error.h"
#include "corridor/rng.h"

namespace corridor {

EgoState InitialState(const Scene& scene) {
  return {0.0, 0.0, 0.0, scene.EgoAt(0.0).v};
}

Trajectory GroundTruthFuture(const Scene& scene) {
  const Pose2 origin = scene.PlanningOrigin();
  Trajectory out;
  double prev = 0.0;
  for (int k = 1; k <= scene.horizon; ++k) {
    const EgoSample s = scene.EgoAt(k * scene.dt);
    const Vec2 p = ToLocalFrame(Vec2(s.px, s.py), origin);
    const double theta = prev + WrapAngle(s.theta - origin.theta - prev);
    out.push_back({p.x(), p.y(), theta, s.v});
    prev = theta;
  }
  return out;
}

Trajectory CurbCrossingReference(const Scene& scene, const Trajectory& truth,
                                 double overshoot) {
  if (truth.empty()) return truth;
  const Pose2 origin = scene.PlanningOrigin();
  const EgoState& last = truth.back();
  const Vec2 end(last.px, last.py);
  const Vec2 normal(-std::sin(last.theta), std::cos(last.theta));
  double lateral = 2.0;  // no curbs: drift left
  double best = std::numeric_limits<double>::infinity();
  for (const Polyline& curb : scene.curbs) {
    const Polyline local = ToLocalFrame(curb, origin);
    for (size_t i = 0; i + 1 < local.size(); ++i) {
      const Vec2 a = local[i];
      const Vec2 ab = local[i + 1] - a;
      const double len2 = ab.squaredNorm();
      const double u =
          len2 > 0.0 ? std::clamp((end - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
      const Vec2 q = a + u * ab;
      const double d = (q - end).norm();
      if (d < best) {
        best = d;
        lateral = (q - end).dot(normal);
      }
    }
  }
  const double target = lateral + std::copysign(overshoot, lateral);
  Trajectory out = truth;
  const double n = static_cast<double>(truth.size());
  for (size_t k = 0; k < out.size(); ++k) {
    const double shift = target * static_cast<double>(k + 1) / n;
    out[k].px += -std::sin(out[k].theta) * shift;
    out[k].py += std::cos(out[k].theta) * shift;
  }
  return out;
}

Trajectory NoisyReference(const Trajectory& truth, uint64_t seed,
                          double amplitude) {
  Rng rng(seed ^ 0xA5A5A5A5ULL);
  const double lat = rng.Uniform(-amplitude, amplitude);
  const double lon = rng.Uniform(-amplitude, amplitude);
  const double wobble = rng.Uniform(-0.3, 0.3) * amplitude;
  const double phase = rng.Uniform(0.0, 2.0 * kPi);
  Trajectory out = truth;
  const double n = static_cast<double>(truth.size());
  for (size_t k = 0; k < out.size(); ++k) {
    const double s = static_cast<double>(k + 1) / n;
    const double d_lat = lat * s + wobble * std::sin(2.0 * kPi * s + phase);
    const double d_lon = lon * s;
    const double c = std::cos(out[k].theta);
    const double sn = std::sin(out[k].theta);
    out[k].px += c * d_lon - sn * d_lat;
    out[k].py += sn * d_lon + c * d_lat;
  }
  return out;
}

PlanRequest MakePlanRequest(const Scene& scene, const Corridor& corridor,
                            const Trajectory& reference) {
  PlanRequest req;
  req.x_init = InitialState(scene);
  req.reference = reference;
  req.corridor = corridor;
  req.footprint = scene.footprint;
  return req;
}

std::vector<SuiteCase> SafetySuite(int count, uint64_t seed) {
  constexpr SceneKind kKinds[] = {SceneKind::kStraight, SceneKind::kTurn,
                                  SceneKind::kCutIn, SceneKind::kNarrow};
  std::vector<SuiteCase> suite;
  for (uint64_t s = seed; static_cast<int>(suite.size()) < count; ++s) {
    if (s - seed > static_cast<uint64_t>(20 * count)) {
      throw InvalidInput("could not build the safety suite");
    }
    SuiteCase c;
    c.scene = GenScene(s, kKinds[s % 4]);
    const AnnotationResult ann = AnnotateCorridor(c.scene);
    if (ann.flagged()) continue;
    c.corridor = ann.corridor;
    c.ground_truth = GroundTruthFuture(c.scene);
    c.request = MakePlanRequest(
        c.scene, c.corridor, CurbCrossingReference(c.scene, c.ground_truth));
    suite.push_back(std::move(c));
  }
  return suite;
}

std::vector<FitSample> FitDataset(int count, uint64_t seed, SceneKind kind,
                                  const PlannerConfig& cfg, double noise) {
  std::vector<FitSample> out;
  for (uint64_t s = seed; static_cast<int>(out.size()) < count; ++s) {
    if (s - seed > static_cast<uint64_t>(20 * count)) {
      throw InvalidInput("could not build the fit dataset");
    }
    const Scene scene = GenScene(s, kind);
    const AnnotationResult ann = AnnotateCorridor(scene);
    if (ann.flagged()) continue;
    FitSample sample;
    sample.demonstration = GroundTruthFuture(scene);
    sample.request = MakePlanRequest(
        scene, ann.corridor, NoisyReference(sample.demonstration, s, noise));
    if (Plan(sample.request, cfg).status != PlanStatus::kOptimal) continue;
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace corridor
