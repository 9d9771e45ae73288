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

#include "corridor/io.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "corridor/error.h"

namespace corridor {
namespace {

TEST(Round9Test, Examples) {
  EXPECT_EQ(Round9(0.1 + 0.2), 0.3);
  EXPECT_EQ(Round9(1234567891234.0), 1234567890000.0);
  EXPECT_EQ(Round9(0.0), 0.0);
}

TEST(SceneJsonTest, RoundTripIsStable) {
  for (SceneKind kind : {SceneKind::kStraight, SceneKind::kTurn, SceneKind::kCutIn,
                         SceneKind::kNarrow}) {
    const Scene s = GenScene(5, kind);
    const Json j = SceneToJson(s);
    const Scene back = SceneFromJson(j);
    EXPECT_EQ(DumpJson(SceneToJson(back)), DumpJson(j));
    ASSERT_EQ(back.ego_log.size(), s.ego_log.size());
    EXPECT_NEAR(back.ego_log[3].px, s.ego_log[3].px, 1e-8 * (1 + std::abs(s.ego_log[3].px)));
    EXPECT_EQ(back.agents.size(), s.agents.size());
    EXPECT_EQ(back.curbs.size(), s.curbs.size());
    EXPECT_NO_THROW(back.Validate());
  }
}

TEST(SceneJsonTest, GenerationIsByteDeterministic) {
  EXPECT_EQ(DumpJson(SceneToJson(GenScene(9, SceneKind::kCutIn))),
            DumpJson(SceneToJson(GenScene(9, SceneKind::kCutIn))));
  EXPECT_NE(DumpJson(SceneToJson(GenScene(9, SceneKind::kCutIn))),
            DumpJson(SceneToJson(GenScene(10, SceneKind::kCutIn))));
}

TEST(SceneJsonTest, RejectsUnknownAndMissingKeys) {
  Json j = SceneToJson(GenScene(1, SceneKind::kStraight));
  Json extra = j;
  extra["surprise"] = 1;
  EXPECT_THROW(SceneFromJson(extra), InvalidInput);
  Json missing = j;
  missing.erase("ego_log");
  EXPECT_THROW(SceneFromJson(missing), InvalidInput);
  EXPECT_THROW(SceneFromJson(Json::array()), InvalidInput);
}

TEST(CorridorJsonTest, RoundTrip) {
  Corridor c = MakeCorridor({MakeRect(1, 2, 0.5, 4, 3), MakeRect(-1, 0, -1, 2, 1)});
  c.degenerate[1] = true;
  const Corridor back = CorridorFromJson(CorridorToJson(c));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_DOUBLE_EQ(back.rects[0].theta, 0.5);
  EXPECT_DOUBLE_EQ(back.rects[1].w, 1.0);
  EXPECT_TRUE(back.degenerate[1]);
  EXPECT_FALSE(back.degenerate[0]);
  Json bad = CorridorToJson(c);
  bad[0]["l"] = -1;
  EXPECT_THROW(CorridorFromJson(bad), InvalidInput);
}

TEST(PlanResultJsonTest, RoundTrip) {
  PlanResult r;
  r.status = PlanStatus::kSoftFallback;
  r.trajectory = {{1, 2, 0.1, 3}, {2, 3, 0.2, 4}};
  r.controls = {{0.5, 0.01}, {-0.5, 0.0}};
  r.solve_time = 0.002;
  const PlanResult back = PlanResultFromJson(PlanResultToJson(r));
  EXPECT_EQ(back.status, r.status);
  EXPECT_DOUBLE_EQ(back.trajectory[1].v, 4.0);
  EXPECT_DOUBLE_EQ(back.controls[0].delta, 0.01);
}

TEST(ConfigJsonTest, RoundTripAndPartialOverride) {
  RunConfig c;
  c.planner.q_diag = {2, 2, 1, 1};
  c.grid.resolution = 0.2;
  c.fit_steps = 7;
  const RunConfig back = ConfigFromJson(ConfigToJson(c));
  EXPECT_EQ(back.planner.q_diag, c.planner.q_diag);
  EXPECT_EQ(back.grid.resolution, 0.2);
  EXPECT_EQ(back.fit_steps, 7);
  const RunConfig partial = ConfigFromJson(Json::parse(R"({"fit": {"lr": 0.5}})"));
  EXPECT_EQ(partial.fit_lr, 0.5);
  EXPECT_EQ(partial.fit_steps, 100);
  EXPECT_THROW(ConfigFromJson(Json::parse(R"({"planer": {}})")), InvalidInput);
}

TEST(FileIoTest, AtomicWriteAndRead) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "corridor_io_test.json").string();
  WriteFileAtomic(path, DumpJson(Json{{"a", 1}}));
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_EQ(ReadJsonFile(path)["a"], 1);
  std::filesystem::remove(path);
  EXPECT_THROW(ReadJsonFile(path), InvalidInput);
  std::ofstream(path) << "{not json";
  EXPECT_THROW(ReadJsonFile(path), InvalidInput);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace corridor
