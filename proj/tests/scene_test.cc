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

#include "corridor/scene.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "corridor/dynamics.h"
#include "corridor/error.h"
#include "test_scenes.h"

namespace corridor {
namespace {

TEST(SampleContourTest, Examples) {
  const Polyline seg{Vec2(0, 0), Vec2(1, 0)};
  const auto s = SampleContour(seg, false, 0.5);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[1].x(), 0.5, 1e-15);

  const Polyline square{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  EXPECT_EQ(SampleContour(square, true, 0.5).size(), 8u);

  const Polyline short_seg{Vec2(0, 0), Vec2(0.3, 0)};
  EXPECT_EQ(SampleContour(short_seg, false, 0.5).size(), 2u);

  EXPECT_THROW(SampleContour(Polyline{}, false, 0.5), InvalidInput);
  EXPECT_THROW(SampleContour(seg, false, 0.0), InvalidInput);
}

TEST(SampleContourTest, SpacingAndVertices) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int k = 0; k < 50; ++k) {
    Polyline pl;
    for (int i = 0; i < 5; ++i) pl.emplace_back(u(rng), u(rng));
    const double delta = 0.1 + std::abs(u(rng)) / 10;
    const auto s = SampleContour(pl, false, delta);
    for (size_t i = 1; i < s.size(); ++i) {
      EXPECT_LE((s[i] - s[i - 1]).norm(), delta + 1e-12);
    }
    for (const Vec2& v : pl) {
      bool found = false;
      for (const Vec2& p : s) found = found || (p - v).norm() < 1e-12;
      EXPECT_TRUE(found);
    }
  }
}

TEST(LaneFilterTest, CrossedLaneDiscardedFarLaneKept) {
  Scene s = testing::StraightEgoScene();
  s.lanes = {{Vec2(0, -5), Vec2(0, 5)}, {Vec2(-20, 10), Vec2(20, 10)}};
  const auto kept = LaneFilter(s, {-5, 5});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0][0].y(), 10.0);
}

TEST(LaneFilterTest, TangentAtMarginDiscarded) {
  Scene s = testing::StraightEgoScene();
  s.lanes = {{Vec2(-20, kLaneOverlapMargin), Vec2(20, kLaneOverlapMargin)},
             {Vec2(-20, kLaneOverlapMargin + 0.01), Vec2(20, kLaneOverlapMargin + 0.01)}};
  const auto kept = LaneFilter(s, {-5, 5});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_NEAR(kept[0][0].y(), kLaneOverlapMargin + 0.01, 1e-12);
}

TEST(ObstaclePointsTest, Examples) {
  Scene s = testing::StraightEgoScene();
  EXPECT_TRUE(ObstaclePointsAt(s, 0.0, 0.5, {}).empty());
  s.agents.push_back(testing::ParkedAgent("a", 10, 0, 0.3));
  const ObstaclePointSet box = ObstaclePointsAt(s, 0.0, 0.5, {});
  EXPECT_EQ(box.size(), 24u);
  s.curbs.push_back({Vec2(-10, 3), Vec2(10, 3)});
  const ObstaclePointSet with_curb = ObstaclePointsAt(s, 0.0, 0.5, {});
  EXPECT_EQ(with_curb.PointsWithTag(ObstacleSource::kCurb).size(), 41u);
  EXPECT_EQ(with_curb.PointsWithTag(ObstacleSource::kAgent).size(), 24u);
}

TEST(ObstaclePointsTest, StoredPoseMatchesDirectExtraction) {
  Scene s = testing::StraightEgoScene();
  AgentTrack a;
  a.id = "m";
  a.poses = {{0.0, 0, 5, 0}, {1.0, 3, 5, 0.4}, {2.0, 6, 6, 0.8}};
  s.agents.push_back(a);
  const auto pts = ObstaclePointsAt(s, 1.0, 0.5, {});
  const auto direct = SampleContour(a.BoxVertices({3, 5, 0.4}), true, 0.5);
  ASSERT_EQ(pts.size(), direct.size());
  for (size_t i = 0; i < direct.size(); ++i) {
    EXPECT_LT((pts.points[i] - direct[i]).norm(), 1e-12);
  }
}

TEST(AgentTrackTest, ShortestArcHeading) {
  AgentTrack a;
  a.poses = {{0.0, 0, 0, kPi - 0.1}, {1.0, 2, 0, -kPi + 0.1}};
  const auto mid = a.PoseAt(0.5);
  ASSERT_TRUE(mid.has_value());
  EXPECT_NEAR(std::abs(WrapAngle(mid->theta)), kPi, 1e-12);
  EXPECT_NEAR(mid->x, 1.0, 1e-12);
  EXPECT_FALSE(a.PoseAt(1.5).has_value());
}

TEST(FrameTest, Examples) {
  EXPECT_LT((ToLocalFrame(Vec2(3, 4), Pose2{}) - Vec2(3, 4)).norm(), 1e-15);
  EXPECT_LT((ToLocalFrame(Vec2(1, 2), Pose2{1, 2, 0})).norm(), 1e-15);
  const Vec2 q = ToLocalFrame(Vec2(1, 0), Pose2{0, 0, kPi / 2});
  EXPECT_NEAR(q.x(), 0.0, 1e-15);
  EXPECT_NEAR(q.y(), -1.0, 1e-15);
}

TEST(FrameTest, RoundTrip) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int k = 0; k < 100; ++k) {
    const Pose2 pose{u(rng), u(rng), u(rng) / 30};
    const Vec2 p(u(rng), u(rng));
    EXPECT_LT((ToWorldFrame(ToLocalFrame(p, pose), pose) - p).norm(), 1e-9);
  }
}

TEST(SceneTest, ValidateRejectsBrokenLogs) {
  Scene s = testing::StraightEgoScene();
  EXPECT_NO_THROW(s.Validate());
  Scene no_zero = s;
  no_zero.ego_log.erase(no_zero.ego_log.begin() + 10);
  EXPECT_THROW(no_zero.Validate(), InvalidInput);
  Scene unordered = s;
  std::swap(unordered.ego_log[2], unordered.ego_log[3]);
  EXPECT_THROW(unordered.Validate(), InvalidInput);
  Scene short_log = s;
  short_log.ego_log.resize(15);  // ends at t = 2
  EXPECT_THROW(short_log.Validate(), InvalidInput);
}

TEST(GenSceneTest, Deterministic) {
  for (SceneKind kind : {SceneKind::kStraight, SceneKind::kTurn, SceneKind::kCutIn,
                         SceneKind::kNarrow}) {
    const Scene a = GenScene(42, kind);
    const Scene b = GenScene(42, kind);
    ASSERT_EQ(a.ego_log.size(), b.ego_log.size());
    for (size_t i = 0; i < a.ego_log.size(); ++i) {
      EXPECT_EQ(a.ego_log[i].px, b.ego_log[i].px);
      EXPECT_EQ(a.ego_log[i].theta, b.ego_log[i].theta);
    }
    EXPECT_EQ(a.agents.size(), b.agents.size());
    EXPECT_NO_THROW(a.Validate());
  }
  EXPECT_THROW(ParseSceneKind("diagonal"), InvalidInput);
  EXPECT_EQ(ParseSceneKind("cut-in"), SceneKind::kCutIn);
}

TEST(GenSceneTest, LogFollowsBicycleModel) {
  const Scene s = GenScene(7, SceneKind::kTurn);
  for (size_t i = 0; i + 1 < s.ego_log.size(); ++i) {
    const EgoSample& a = s.ego_log[i];
    const EgoSample& b = s.ego_log[i + 1];
    EXPECT_NEAR(b.px, a.px + a.v * std::cos(a.theta) * s.dt, 1e-6);
    EXPECT_NEAR(b.py, a.py + a.v * std::sin(a.theta) * s.dt, 1e-6);
  }
}

// Curbs are on opposite sides of the ego at every logged time.
TEST(GenSceneTest, StraightCurbsBracketEgo) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Scene s = GenScene(seed, SceneKind::kStraight);
    ASSERT_EQ(s.curbs.size(), 2u);
    for (const EgoSample& e : s.ego_log) {
      const Vec2 p(e.px, e.py);
      const Vec2 left(-std::sin(e.theta), std::cos(e.theta));
      double side[2];
      for (int c = 0; c < 2; ++c) {
        double best = 1e18;
        for (const Vec2& q : s.curbs[c]) {
          if ((q - p).norm() < best) {
            best = (q - p).norm();
            side[c] = (q - p).dot(left);
          }
        }
      }
      EXPECT_LT(side[0] * side[1], 0.0);
    }
  }
}

TEST(GenSceneTest, CutInCrossesEgoLane) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Scene s = GenScene(seed, SceneKind::kCutIn);
    int crossing = 0;
    for (const AgentTrack& a : s.agents) {
      double lo = 1e9, hi = -1e9;
      for (const AgentPose& p : a.poses) {
        const Pose2 ego = s.EgoPoseAt(std::clamp(p.t, -5.0, 5.0));
        // Lateral offset against the ego heading; the road is straight.
        const double lat = ToLocalFrame(Vec2(p.px, p.py), ego).y();
        lo = std::min(lo, lat);
        hi = std::max(hi, lat);
      }
      if (hi > 2.5 && lo < 0.5) ++crossing;
    }
    EXPECT_EQ(crossing, 1) << seed;
  }
}

TEST(GenSceneTest, NoAgentOverlapsEgo) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Scene s = GenScene(seed, static_cast<SceneKind>(seed % 4));
    const Pose2 ego = s.EgoPoseAt(0.0);
    const OrientedRect ego_box{ego.x, ego.y, ego.theta, 2 * s.footprint.half_length,
                               2 * s.footprint.half_width};
    for (const AgentTrack& a : s.agents) {
      const auto p = a.PoseAt(0.0);
      if (!p) continue;
      EXPECT_FALSE(RectsOverlap(ego_box, {p->x, p->y, p->theta, 2 * a.half_length,
                                          2 * a.half_width}));
    }
  }
}

}  // namespace
}  // namespace corridor
