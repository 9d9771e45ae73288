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

#ifndef CORRIDOR_RENDER_H_
#define CORRIDOR_RENDER_H_

#include <string>

#include "corridor/annotation.h"
#include "corridor/dynamics.h"
#include "corridor/scene.h"

namespace corridor {

struct RenderOptions {
  double pixels_per_meter = 12.0;
  double margin = 5.0;  // meters around the content
};

// SVG overlay in the planning frame (x forward, drawn to the right): curbs,
// lane dividers, agents, the corridor and both trajectories. Each future
// timestamp gets its own color. Empty trajectories are skipped.
std::string RenderSvg(const Scene& scene, const Corridor& corridor,
                      const Trajectory& reference, const Trajectory& optimized,
                      const RenderOptions& options = {});

}  // namespace corridor

#endif  // CORRIDOR_RENDER_H_
