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

#include "corridor/geometry.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "corridor/error.h"
#include "oracles.h"

namespace corridor {
namespace {

void ExpectVertices(const OrientedRect& r, std::array<Vec2, 4> expected) {
  const auto v = RectVertices(r);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(v[i].x(), expected[i].x(), 1e-12) << i;
    EXPECT_NEAR(v[i].y(), expected[i].y(), 1e-12) << i;
  }
}

TEST(WrapAngleTest, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(WrapAngle(kPi), kPi);
  EXPECT_DOUBLE_EQ(WrapAngle(-kPi), kPi);
  EXPECT_NEAR(WrapAngle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(WrapAngle(2 * kPi + 0.1), 0.1, 1e-12);
}

TEST(MakeRectTest, RejectsNonPositiveExtent) {
  EXPECT_THROW(MakeRect(0, 0, 0, 0, 1), InvalidInput);
  EXPECT_THROW(MakeRect(0, 0, 0, 1, -1), InvalidInput);
  EXPECT_THROW(MakeRect(0, 0, 0, NAN, 1), InvalidInput);
  EXPECT_NEAR(MakeRect(0, 0, 3 * kPi, 1, 1).theta, kPi, 1e-12);
}

TEST(RectVerticesTest, AxisAligned) {
  ExpectVertices(MakeRect(0, 0, 0, 4, 2), {Vec2(2, 1), Vec2(-2, 1), Vec2(-2, -1), Vec2(2, -1)});
}

TEST(RectVerticesTest, QuarterTurn) {
  ExpectVertices(MakeRect(0, 0, kPi / 2, 4, 2),
                 {Vec2(-1, 2), Vec2(-1, -2), Vec2(1, -2), Vec2(1, 2)});
}

TEST(RectVerticesTest, Translated) {
  ExpectVertices(MakeRect(1, 1, 0, 2, 2), {Vec2(2, 2), Vec2(0, 2), Vec2(0, 0), Vec2(2, 0)});
}

TEST(RectToHalfspacesTest, AxisAlignedRows) {
  const HalfspaceSet h = RectToHalfspaces(MakeRect(0, 0, 0, 4, 2));
  ASSERT_EQ(h.rows.size(), 4u);
  const double expected[4][3] = {{1, 0, 2}, {-1, 0, 2}, {0, 1, 1}, {0, -1, 1}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(h.rows[i].ax, expected[i][0], 1e-15);
    EXPECT_NEAR(h.rows[i].ay, expected[i][1], 1e-15);
    EXPECT_NEAR(h.rows[i].b, expected[i][2], 1e-15);
  }
  EXPECT_TRUE(h.Contains(Vec2(0, 0)));
}

TEST(RectToHalfspacesTest, UnitNormals) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const auto h = RectToHalfspaces(MakeRect(10 * u(rng), 10 * u(rng), 4 * u(rng),
                                             1 + 5 * std::abs(u(rng)), 1 + 3 * std::abs(u(rng))));
    for (const Halfspace& row : h.rows) {
      EXPECT_NEAR(std::hypot(row.ax, row.ay), 1.0, 1e-12);
    }
  }
}

// Membership agrees with a polygon test on the vertices.
TEST(RectToHalfspacesTest, MembershipMatchesPolygonOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 10; ++k) {
    const OrientedRect r = k == 0 ? MakeRect(0, 0, kPi / 4, 4, 2)
                                  : MakeRect(5 * u(rng), 5 * u(rng), kPi * u(rng),
                                             0.5 + 6 * std::abs(u(rng)),
                                             0.5 + 3 * std::abs(u(rng)));
    const auto h = RectToHalfspaces(r);
    const auto poly = RectVertices(r);
    int disagreements = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 p = r.center() + Vec2(5 * u(rng), 5 * u(rng));
      if (h.Contains(p, 1e-9) != oracle::InConvexPolygon(poly, p, 1e-9)) {
        ++disagreements;
      }
    }
    EXPECT_EQ(disagreements, 0);
  }
}

TEST(InteriorDistanceTest, Examples) {
  const OrientedRect r = MakeRect(0, 0, 0, 4, 2);
  EXPECT_DOUBLE_EQ(InteriorDistance(Vec2(10, 10), r), 0.0);
  EXPECT_DOUBLE_EQ(InteriorDistance(Vec2(0, 0), r), 1.0);
  EXPECT_NEAR(InteriorDistance(Vec2(1.5, 0), r), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(InteriorDistance(Vec2(2, 0), r), 0.0);  // on the boundary
}

TEST(InteriorDistanceTest, MatchesEdgeDistances) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const OrientedRect r = MakeRect(u(rng), u(rng), kPi * u(rng), 1 + std::abs(u(rng)) * 4,
                                    1 + std::abs(u(rng)) * 2);
    const Vec2 p = r.center() + Vec2(2 * u(rng), 2 * u(rng));
    const auto v = RectVertices(r);
    double expected = 0.0;
    if (oracle::InConvexPolygon(v, p, 0.0)) {
      expected = 1e9;
      for (int i = 0; i < 4; ++i) {
        expected = std::min(expected, PointSegmentDistance(p, v[i], v[(i + 1) % 4]));
      }
    }
    EXPECT_NEAR(InteriorDistance(p, r), expected, 1e-12);
    EXPECT_LE(InteriorDistance(p, r), 0.5 * std::min(r.l, r.w) + 1e-12);
  }
}

TEST(InteriorDistanceTest, ContinuousAtTheEdge) {
  const OrientedRect r = MakeRect(0, 0, 0.3, 4, 2);
  const Vec2 left(-std::sin(0.3), std::cos(0.3));
  for (double d : {1e-2, 1e-4, 1e-6}) {
    EXPECT_NEAR(InteriorDistance((1.0 - d) * left, r), d, 1e-12);
  }
}

TEST(FootprintConstraintRowsTest, MinkowskiShrink) {
  const HalfspaceSet h = RectToHalfspaces(MakeRect(0, 0, 0, 4, 2));
  const auto rows = FootprintConstraintRows(h, {1.0, 0.5}, 0.0);
  ASSERT_EQ(rows.size(), 16u);
  const auto feasible = [&](double x, double y) {
    for (const auto& r : rows) {
      if (r.c_px * x + r.c_py * y > r.b + 1e-12) return false;
    }
    return true;
  };
  EXPECT_TRUE(feasible(1.0, 0.5));
  EXPECT_TRUE(feasible(-1.0, -0.5));
  EXPECT_FALSE(feasible(1.01, 0.0));
  EXPECT_FALSE(feasible(0.0, 0.51));
}

TEST(FootprintConstraintRowsTest, ExactFit) {
  const HalfspaceSet h = RectToHalfspaces(MakeRect(0, 0, 0, 4, 2));
  const auto rows = FootprintConstraintRows(h, {2.0, 1.0}, 0.0);
  // The binding vertex of each edge leaves zero room: only the origin fits.
  for (size_t e = 0; e < 4; ++e) {
    double tightest = rows[4 * e].b;
    for (size_t v = 1; v < 4; ++v) tightest = std::min(tightest, rows[4 * e + v].b);
    EXPECT_NEAR(tightest, 0.0, 1e-12);
  }
}

TEST(FootprintConstraintRowsTest, RotatedRectangle) {
  const HalfspaceSet h = RectToHalfspaces(MakeRect(0, 0, kPi / 2, 4, 2));
  const auto rows = FootprintConstraintRows(h, {1.0, 0.5}, kPi / 2);
  const auto feasible = [&](double x, double y) {
    for (const auto& r : rows) {
      if (r.c_px * x + r.c_py * y + r.c_theta * kPi / 2 > r.b + 1e-12) return false;
    }
    return true;
  };
  EXPECT_TRUE(feasible(0.5, 1.0));
  EXPECT_FALSE(feasible(0.0, 1.01));
  EXPECT_FALSE(feasible(0.51, 0.0));
}

// At the linearization heading the rows are exact.
TEST(FootprintConstraintRowsTest, ExactAtNominalHeading) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const EgoFootprint fp{1.5, 0.7};
  for (int k = 0; k < 200; ++k) {
    const OrientedRect r = MakeRect(0, 0, kPi * u(rng), 6, 3);
    const double th = kPi * u(rng);
    const Vec2 c(2 * u(rng), 2 * u(rng));
    const auto h = RectToHalfspaces(r);
    bool rows_ok = true;
    for (const auto& row : FootprintConstraintRows(h, fp, th)) {
      rows_ok = rows_ok && row.c_px * c.x() + row.c_py * c.y() + row.c_theta * th <= row.b + 1e-12;
    }
    bool vertices_ok = true;
    for (const Vec2& v : FootprintVertices(fp)) {
      vertices_ok = vertices_ok && h.Contains(c + Rotate(v, th), 1e-12);
    }
    EXPECT_EQ(rows_ok, vertices_ok);
  }
}

TEST(RectsOverlapTest, SeparatedAndTouching) {
  EXPECT_FALSE(RectsOverlap(MakeRect(0, 0, 0, 2, 2), MakeRect(3, 0, 0, 2, 2)));
  EXPECT_TRUE(RectsOverlap(MakeRect(0, 0, 0, 2, 2), MakeRect(2, 0, 0, 2, 2)));
  EXPECT_TRUE(RectsOverlap(MakeRect(0, 0, 0, 4, 1), MakeRect(0, 0, kPi / 2, 4, 1)));
}

TEST(PolylineTest, Distances) {
  const Polyline a{Vec2(0, 0), Vec2(10, 0)};
  const Polyline b{Vec2(0, 2), Vec2(10, 2)};
  const Polyline c{Vec2(5, -1), Vec2(5, 1)};
  EXPECT_NEAR(PolylineDistance(a, b), 2.0, 1e-12);
  EXPECT_EQ(PolylineDistance(a, c), 0.0);
  EXPECT_NEAR(PointPolylineDistance(Vec2(12, 0), a), 2.0, 1e-12);
  EXPECT_TRUE(SegmentsIntersect(Vec2(0, 0), Vec2(1, 1), Vec2(0, 1), Vec2(1, 0)));
  EXPECT_FALSE(SegmentsIntersect(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)));
}

}  // namespace
}  // namespace corridor
