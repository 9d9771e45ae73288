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

#ifndef CORRIDOR_TESTS_RANDOM_PROBLEMS_H_
#define CORRIDOR_TESTS_RANDOM_PROBLEMS_H_

#include <random>

#include <Eigen/Core>

#include "corridor/qp.h"

namespace corridor::testing {

inline Eigen::MatrixXd RandomMatrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  }
  return m;
}

// Strictly convex QP whose feasible set contains a random point, so it is
// never infeasible. Roughly half the rows pass through that point.
inline QpProblem RandomQp(std::mt19937_64& rng, int n, int me, int mi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QpProblem p;
  const Eigen::MatrixXd m = RandomMatrix(rng, n, n);
  p.H = m.transpose() * m + 0.1 * Eigen::MatrixXd::Identity(n, n);
  p.g = 3.0 * RandomMatrix(rng, n, 1);
  const Eigen::VectorXd z0 = RandomMatrix(rng, n, 1);
  p.A_eq = RandomMatrix(rng, me, n);
  p.b_eq = p.A_eq * z0;
  p.A_in = RandomMatrix(rng, mi, n);
  p.b_in = p.A_in * z0;
  for (int i = 0; i < mi; ++i) {
    if (u(rng) < 0.5) p.b_in(i) += u(rng);
  }
  return p;
}

}  // namespace corridor::testing

#endif  // CORRIDOR_TESTS_RANDOM_PROBLEMS_H_
