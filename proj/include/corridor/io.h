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

#ifndef CORRIDOR_IO_H_
#define CORRIDOR_IO_H_

#include <string>

#include "json.hpp"

#include "corridor/annotation.h"
#include "corridor/eval.h"
#include "corridor/planner.h"
#include "corridor/scene.h"

namespace corridor {

using Json = nlohmann::ordered_json;

// Rounds to 9 significant digits so that serialized output is stable.
double Round9(double x);

// Every hyperparameter the command line uses. The planner's dt, horizon and
// wheelbase are taken from the scene being planned.
struct RunConfig {
  AnnotationConfig annotation;
  PlannerConfig planner;
  BevGridSpec grid;
  int fit_steps = 100;
  double fit_lr = 1e-2;
};

// All parsers throw InvalidInput on missing or unknown keys and wrong types.
Json SceneToJson(const Scene& scene);
Scene SceneFromJson(const Json& j);

Json CorridorToJson(const Corridor& corridor);
Corridor CorridorFromJson(const Json& j);

Json TrajectoryToJson(const Trajectory& traj);
Trajectory TrajectoryFromJson(const Json& j);

Json PlanResultToJson(const PlanResult& result);
PlanResult PlanResultFromJson(const Json& j);

Json MetricsToJson(const MetricsReport& report);

Json ConfigToJson(const RunConfig& config);
// Keys absent from j keep their defaults.
RunConfig ConfigFromJson(const Json& j);

// Throws InvalidInput when the file is missing or not valid JSON.
Json ReadJsonFile(const std::string& path);
// Two-space indented with a trailing newline.
std::string DumpJson(const Json& j);
// Writes to a temporary sibling and renames it into place, so a failed run
// never leaves a partial file.
void WriteFileAtomic(const std::string& path, const std::string& content);

}  // namespace corridor

#endif  // CORRIDOR_IO_H_
