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

#ifndef CORRIDOR_SCENARIO_H_
#define CORRIDOR_SCENARIO_H_

#include <cstdint>
#include <vector>

#include "corridor/annotation.h"
#include "corridor/dynamics.h"
#include "corridor/planner.h"
#include "corridor/scene.h"

namespace corridor {

// Ego state at t = 0 in the planning frame.
EgoState InitialState(const Scene& scene);

// Logged ego states at t = dt..N dt in the planning frame, headings
// continuous from 0.
Trajectory GroundTruthFuture(const Scene& scene);

// The ground truth pushed sideways toward the nearest curb, growing linearly
// in time, so that the last state sits `overshoot` meters past it.
Trajectory CurbCrossingReference(const Scene& scene, const Trajectory& truth,
                                 double overshoot = 1.0);

// Smooth random lateral and longitudinal offsets of up to `amplitude`.
Trajectory NoisyReference(const Trajectory& truth, uint64_t seed,
                          double amplitude);

PlanRequest MakePlanRequest(const Scene& scene, const Corridor& corridor,
                            const Trajectory& reference);

struct SuiteCase {
  Scene scene;
  Corridor corridor;
  Trajectory ground_truth;
  PlanRequest request;
};

// Annotated scenes of every kind with curb-crossing references. Scenes whose
// annotation needed the minimum-rectangle fallback are skipped.
std::vector<SuiteCase> SafetySuite(int count, uint64_t seed);

// Scenes of one kind whose noisy-reference requests solve to optimality under
// cfg; the demonstration is the logged future.
std::vector<FitSample> FitDataset(int count, uint64_t seed, SceneKind kind,
                                  const PlannerConfig& cfg,
                                  double noise = 1.0);

}  // namespace corridor

#endif  // CORRIDOR_SCENARIO_H_
