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

// Slow, independent reference implementations used by the tests.

#ifndef CORRIDOR_TESTS_ORACLES_H_
#define CORRIDOR_TESTS_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "corridor/annotation.h"
#include "corridor/geometry.h"
#include "corridor/qp.h"

namespace corridor::oracle {

// Point in closed convex polygon (counter-clockwise) via edge cross products.
inline bool InConvexPolygon(std::span<const Vec2> poly, const Vec2& p,
                            double tol) {
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const Vec2 e = b - a;
    const double cross = e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x());
    if (cross < -tol * e.norm()) return false;
  }
  return true;
}

// Every 4-tuple of candidate edges: boundary sides and obstacle coordinates.
inline double BruteForceMerArea(std::span<const Vec2> points,
                                const MerBoundary& b, const Vec2& anchor) {
  const double x0 = anchor.x() - 0.5 * b.l_max, x1 = anchor.x() + 0.5 * b.l_max;
  const double y0 = anchor.y() - 0.5 * b.w_max, y1 = anchor.y() + 0.5 * b.w_max;
  std::vector<Vec2> inside;
  for (const Vec2& p : points) {
    if (p.x() > x0 && p.x() < x1 && p.y() > y0 && p.y() < y1) inside.push_back(p);
  }
  std::vector<double> xs{x0, x1}, ys{y0, y1};
  for (const Vec2& p : inside) {
    xs.push_back(p.x());
    ys.push_back(p.y());
  }
  double best = 0.0;
  for (double l : xs) {
    for (double r : xs) {
      if (!(l <= anchor.x() && anchor.x() <= r && l < r)) continue;
      for (double lo : ys) {
        for (double hi : ys) {
          if (!(lo <= anchor.y() && anchor.y() <= hi && lo < hi)) continue;
          const double area = (r - l) * (hi - lo);
          if (area <= best) continue;
          bool empty = true;
          for (const Vec2& p : inside) {
            if (p.x() > l && p.x() < r && p.y() > lo && p.y() < hi) {
              empty = false;
              break;
            }
          }
          if (empty) best = area;
        }
      }
    }
  }
  return best;
}

// Largest empty rectangle whose edges lie on a grid of the given pitch.
inline double GridMerArea(std::span<const Vec2> points, const MerBoundary& b,
                          const Vec2& anchor, double pitch) {
  const double x0 = anchor.x() - 0.5 * b.l_max;
  const double y0 = anchor.y() - 0.5 * b.w_max;
  const int nx = static_cast<int>(std::lround(b.l_max / pitch));
  const int ny = static_cast<int>(std::lround(b.w_max / pitch));
  const double ytop = y0 + ny * pitch;
  double best = 0.0;
  for (int i = 0; i <= nx; ++i) {
    const double l = x0 + i * pitch;
    if (l > anchor.x()) break;
    for (int j = nx; j > i; --j) {
      const double r = x0 + j * pitch;
      if (r < anchor.x()) break;
      double hi = ytop, lo = y0;
      bool blocked = false;
      for (const Vec2& p : points) {
        if (!(p.x() > l && p.x() < r)) continue;
        if (p.y() >= anchor.y() && p.y() < hi) hi = p.y();
        if (p.y() <= anchor.y() && p.y() > lo) lo = p.y();
        if (p.y() == anchor.y()) blocked = true;
      }
      if (blocked) continue;
      const double hs = y0 + std::floor((hi - y0) / pitch + 1e-9) * pitch;
      const double ls = y0 + std::ceil((lo - y0) / pitch - 1e-9) * pitch;
      if (hs < anchor.y() || ls > anchor.y() || hs <= ls) continue;
      best = std::max(best, (r - l) * (hs - ls));
    }
  }
  return best;
}

struct EnumeratedQp {
  Eigen::VectorXd z;
  double objective = std::numeric_limits<double>::infinity();
};

// Solves the equality-constrained QP for every subset of inequality rows
// treated as equalities and keeps the best feasible point.
inline std::optional<EnumeratedQp> EnumerateQp(const QpProblem& p,
                                               double feas_tol = 1e-9) {
  const int n = p.num_variables();
  const int me = p.num_equalities();
  const int mi = p.num_inequalities();
  std::optional<EnumeratedQp> best;
  for (int mask = 0; mask < (1 << mi); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < mi; ++i) {
      if (mask & (1 << i)) rows.push_back(i);
    }
    const int m = me + static_cast<int>(rows.size());
    if (m > n) continue;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
    K.topLeftCorner(n, n) = p.H;
    rhs.head(n) = -p.g;
    for (int i = 0; i < me; ++i) {
      K.block(n + i, 0, 1, n) = p.A_eq.row(i);
      K.block(0, n + i, n, 1) = p.A_eq.row(i).transpose();
      rhs(n + i) = p.b_eq(i);
    }
    for (size_t k = 0; k < rows.size(); ++k) {
      const int r = n + me + static_cast<int>(k);
      K.block(r, 0, 1, n) = p.A_in.row(rows[k]);
      K.block(0, r, n, 1) = p.A_in.row(rows[k]).transpose();
      rhs(r) = p.b_in(rows[k]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd z = lu.solve(rhs).head(n);
    if (me > 0 && (p.A_eq * z - p.b_eq).cwiseAbs().maxCoeff() > feas_tol) continue;
    if (mi > 0 && (p.A_in * z - p.b_in).maxCoeff() > feas_tol) continue;
    const double obj = 0.5 * z.dot(p.H * z) + p.g.dot(z);
    if (!best || obj < best->objective) best = EnumeratedQp{z, obj};
  }
  return best;
}

inline Eigen::VectorXd FiniteDifference(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

inline double RelErr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

}  // namespace corridor::oracle

#endif  // CORRIDOR_TESTS_ORACLES_H_
