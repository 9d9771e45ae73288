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

#ifndef CORRIDOR_GRADCHECK_H_
#define CORRIDOR_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace corridor {

struct GradcheckReport {
  std::string suite;
  int cases = 0;
  int failures = 0;
  double max_rel_error = 0.0;
  double tolerance = 0.0;

  bool passed() const { return cases > 0 && failures == 0; }
};

// ||a - n|| / max(||a||, ||n||, 1e-12).
double RelativeError(const Eigen::VectorXd& analytic,
                     const Eigen::VectorXd& numeric);

Eigen::VectorXd CentralDifference(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h);

inline constexpr double kFiniteDifferenceStep = 1e-6;

// Corridor, map safety, agent safety, area and imitation losses at random
// configurations away from ties.
GradcheckReport CheckLossGradients(int configs, uint64_t seed);
// QP backward against finite differences of the solution map.
GradcheckReport CheckQpGradients(int problems, uint64_t seed);
// Imitation loss w.r.t. the cost weights through the whole planner.
GradcheckReport CheckPlanGradients(int scenes, uint64_t seed);

std::vector<GradcheckReport> RunAllGradchecks(uint64_t seed);

}  // namespace corridor

#endif  // CORRIDOR_GRADCHECK_H_
