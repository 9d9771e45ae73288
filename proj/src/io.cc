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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "corridor/error.h"

namespace corridor {

double Round9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::strtod(buf, nullptr);
}

namespace {

// Rejects keys outside `allowed` and reports the first missing required key.
void CheckKeys(const Json& j, std::string_view what,
               std::initializer_list<std::string_view> required,
               std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : required) known = known || key == k;
    for (auto k : optional) known = known || key == k;
    if (!known) {
      throw InvalidInput("unknown key '" + key + "' in " + std::string(what));
    }
  }
  for (auto k : required) {
    if (!j.contains(std::string(k))) {
      throw InvalidInput("missing key '" + std::string(k) + "' in " +
                         std::string(what));
    }
  }
}

double Num(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw InvalidInput(std::string(key) + " must be a number");
  return v.get<double>();
}

Json Pair(double a, double b) { return Json::array({Round9(a), Round9(b)}); }

Vec2 PairFrom(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("expected a [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json PolylineToJson(const Polyline& pl) {
  Json out = Json::array();
  for (const Vec2& p : pl) out.push_back(Pair(p.x(), p.y()));
  return out;
}

Polyline PolylineFromJson(const Json& j) {
  if (!j.is_array()) throw InvalidInput("polyline must be an array");
  Polyline pl;
  for (const Json& p : j) pl.push_back(PairFrom(p));
  return pl;
}

template <typename F>
auto Guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Json SceneToJson(const Scene& scene) {
  Json j;
  j["dt"] = Round9(scene.dt);
  j["horizon"] = scene.horizon;
  j["wheelbase"] = Round9(scene.wheelbase);
  Json log = Json::array();
  for (const EgoSample& s : scene.ego_log) {
    log.push_back({{"t", Round9(s.t)},
                   {"px", Round9(s.px)},
                   {"py", Round9(s.py)},
                   {"theta", Round9(s.theta)},
                   {"v", Round9(s.v)}});
  }
  j["ego_log"] = log;
  Json agents = Json::array();
  for (const AgentTrack& a : scene.agents) {
    Json poses = Json::array();
    for (const AgentPose& p : a.poses) {
      poses.push_back({{"t", Round9(p.t)},
                       {"px", Round9(p.px)},
                       {"py", Round9(p.py)},
                       {"theta", Round9(p.theta)}});
    }
    agents.push_back({{"id", a.id},
                      {"half_length", Round9(a.half_length)},
                      {"half_width", Round9(a.half_width)},
                      {"poses", poses}});
  }
  j["agents"] = agents;
  Json curbs = Json::array();
  for (const Polyline& c : scene.curbs) curbs.push_back(PolylineToJson(c));
  j["curbs"] = curbs;
  Json lanes = Json::array();
  for (const Polyline& l : scene.lanes) lanes.push_back(PolylineToJson(l));
  j["lanes"] = lanes;
  j["footprint"] = {{"half_length", Round9(scene.footprint.half_length)},
                    {"half_width", Round9(scene.footprint.half_width)}};
  return j;
}

Scene SceneFromJson(const Json& j) {
  return Guarded([&] {
    CheckKeys(j, "scene",
              {"dt", "horizon", "wheelbase", "ego_log", "agents", "curbs",
               "lanes", "footprint"});
    Scene s;
    s.dt = Num(j, "dt");
    if (!j.at("horizon").is_number_integer()) {
      throw InvalidInput("horizon must be an integer");
    }
    s.horizon = j.at("horizon").get<int>();
    s.wheelbase = Num(j, "wheelbase");
    for (const Json& e : j.at("ego_log")) {
      CheckKeys(e, "ego sample", {"t", "px", "py", "theta", "v"});
      s.ego_log.push_back({Num(e, "t"), Num(e, "px"), Num(e, "py"),
                           Num(e, "theta"), Num(e, "v")});
    }
    for (const Json& a : j.at("agents")) {
      CheckKeys(a, "agent", {"id", "half_length", "half_width", "poses"});
      AgentTrack track;
      track.id = a.at("id").get<std::string>();
      track.half_length = Num(a, "half_length");
      track.half_width = Num(a, "half_width");
      for (const Json& p : a.at("poses")) {
        CheckKeys(p, "agent pose", {"t", "px", "py", "theta"});
        track.poses.push_back(
            {Num(p, "t"), Num(p, "px"), Num(p, "py"), Num(p, "theta")});
      }
      s.agents.push_back(std::move(track));
    }
    for (const Json& c : j.at("curbs")) s.curbs.push_back(PolylineFromJson(c));
    for (const Json& l : j.at("lanes")) s.lanes.push_back(PolylineFromJson(l));
    const Json& f = j.at("footprint");
    CheckKeys(f, "footprint", {"half_length", "half_width"});
    s.footprint = {Num(f, "half_length"), Num(f, "half_width")};
    s.Validate();
    return s;
  });
}

Json CorridorToJson(const Corridor& corridor) {
  Json out = Json::array();
  for (size_t i = 0; i < corridor.rects.size(); ++i) {
    const OrientedRect& r = corridor.rects[i];
    Json e = {{"cx", Round9(r.cx)}, {"cy", Round9(r.cy)},
              {"theta", Round9(r.theta)}, {"l", Round9(r.l)},
              {"w", Round9(r.w)}};
    if (i < corridor.degenerate.size() && corridor.degenerate[i]) {
      e["degenerate"] = true;
    }
    out.push_back(e);
  }
  return out;
}

Corridor CorridorFromJson(const Json& j) {
  return Guarded([&] {
    if (!j.is_array()) throw InvalidInput("corridor must be an array");
    Corridor c;
    for (const Json& e : j) {
      CheckKeys(e, "corridor rectangle", {"cx", "cy", "theta", "l", "w"},
                {"degenerate"});
      c.rects.push_back(MakeRect(Num(e, "cx"), Num(e, "cy"), Num(e, "theta"),
                                 Num(e, "l"), Num(e, "w")));
      c.degenerate.push_back(e.value("degenerate", false));
    }
    return c;
  });
}

Json TrajectoryToJson(const Trajectory& traj) {
  Json out = Json::array();
  for (const EgoState& x : traj) {
    out.push_back(Json::array(
        {Round9(x.px), Round9(x.py), Round9(x.theta), Round9(x.v)}));
  }
  return out;
}

Trajectory TrajectoryFromJson(const Json& j) {
  return Guarded([&] {
    if (!j.is_array()) throw InvalidInput("trajectory must be an array");
    Trajectory out;
    for (const Json& e : j) {
      if (!e.is_array() || e.size() != 4) {
        throw InvalidInput("trajectory states are [px, py, theta, v]");
      }
      out.push_back({e[0].get<double>(), e[1].get<double>(),
                     e[2].get<double>(), e[3].get<double>()});
    }
    return out;
  });
}

Json PlanResultToJson(const PlanResult& result) {
  Json j;
  j["status"] = std::string(PlanStatusName(result.status));
  j["solve_time_s"] = Round9(result.solve_time);
  Json controls = Json::array();
  for (const Control& u : result.controls) controls.push_back(Pair(u.a, u.delta));
  j["controls"] = controls;
  j["trajectory"] = TrajectoryToJson(result.trajectory);
  return j;
}

PlanResult PlanResultFromJson(const Json& j) {
  return Guarded([&] {
    CheckKeys(j, "plan", {"status", "solve_time_s", "controls", "trajectory"});
    PlanResult r;
    const std::string status = j.at("status").get<std::string>();
    if (status == "optimal") {
      r.status = PlanStatus::kOptimal;
    } else if (status == "soft-fallback") {
      r.status = PlanStatus::kSoftFallback;
    } else if (status == "reference-passthrough") {
      r.status = PlanStatus::kReferencePassthrough;
    } else {
      throw InvalidInput("unknown plan status '" + status + "'");
    }
    r.solve_time = Num(j, "solve_time_s");
    for (const Json& u : j.at("controls")) {
      const Vec2 p = PairFrom(u);
      r.controls.push_back({p.x(), p.y()});
    }
    r.trajectory = TrajectoryFromJson(j.at("trajectory"));
    return r;
  });
}

namespace {

Json Rounded(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(Round9(x));
  return out;
}

}  // namespace

Json MetricsToJson(const MetricsReport& r) {
  Json j;
  j["count"] = r.count;
  j["acr_per_t"] = Rounded(r.acr_per_t);
  j["ccr_per_t"] = Rounded(r.ccr_per_t);
  j["acr_avg"] = Round9(r.acr_avg);
  j["ccr_avg"] = Round9(r.ccr_avg);
  j["l2_per_t"] = Rounded(r.l2_per_t);
  j["l2_avg"] = Round9(r.l2_avg);
  j["solve_time_stats"] = {{"mean", Round9(r.solve_time.mean)},
                           {"median", Round9(r.solve_time.median)},
                           {"p95", Round9(r.solve_time.p95)},
                           {"max", Round9(r.solve_time.max)}};
  return j;
}

Json ConfigToJson(const RunConfig& c) {
  Json j;
  j["annotation"] = {
      {"delta_obs", Round9(c.annotation.delta_obs)},
      {"boundary", Pair(c.annotation.boundary.l_max, c.annotation.boundary.w_max)},
      {"t_ego", Pair(c.annotation.t_ego.begin, c.annotation.t_ego.end)}};
  const PlannerConfig& p = c.planner;
  j["planner"] = {{"q_diag", Rounded({p.q_diag.begin(), p.q_diag.end()})},
                  {"r_diag", Rounded({p.r_diag.begin(), p.r_diag.end()})},
                  {"u_min", Pair(p.u_min.a, p.u_min.delta)},
                  {"u_max", Pair(p.u_max.a, p.u_max.delta)},
                  {"tol", Round9(p.tol)},
                  {"slack_weight", Round9(p.slack_weight)},
                  {"safety_margin", Round9(p.safety_margin)}};
  j["eval"] = {{"grid_res", Round9(c.grid.resolution)},
               {"extent", Pair(c.grid.extent_x, c.grid.extent_y)}};
  j["fit"] = {{"steps", c.fit_steps}, {"lr", Round9(c.fit_lr)}};
  return j;
}

namespace {

template <size_t K>
void ReadArray(const Json& j, const char* key, std::array<double, K>& out) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != K) {
    throw InvalidInput(std::string(key) + " has the wrong length");
  }
  for (size_t i = 0; i < K; ++i) out[i] = v[i].get<double>();
}

void ReadNum(const Json& j, const char* key, double& out) {
  if (j.contains(key)) out = Num(j, key);
}

}  // namespace

RunConfig ConfigFromJson(const Json& j) {
  return Guarded([&] {
    RunConfig c;
    CheckKeys(j, "config", {}, {"annotation", "planner", "eval", "fit"});
    if (j.contains("annotation")) {
      const Json& a = j.at("annotation");
      CheckKeys(a, "annotation", {}, {"delta_obs", "boundary", "t_ego"});
      ReadNum(a, "delta_obs", c.annotation.delta_obs);
      if (a.contains("boundary")) {
        const Vec2 b = PairFrom(a.at("boundary"));
        c.annotation.boundary = {b.x(), b.y()};
      }
      if (a.contains("t_ego")) {
        const Vec2 t = PairFrom(a.at("t_ego"));
        c.annotation.t_ego = {t.x(), t.y()};
      }
      if (!(c.annotation.delta_obs > 0.0) ||
          !(c.annotation.boundary.l_max > 0.0) ||
          !(c.annotation.boundary.w_max > 0.0) ||
          !(c.annotation.t_ego.begin < c.annotation.t_ego.end)) {
        throw InvalidInput("annotation settings out of range");
      }
    }
    if (j.contains("planner")) {
      const Json& p = j.at("planner");
      CheckKeys(p, "planner", {},
                {"q_diag", "r_diag", "u_min", "u_max", "tol", "slack_weight",
                 "safety_margin"});
      ReadArray(p, "q_diag", c.planner.q_diag);
      ReadArray(p, "r_diag", c.planner.r_diag);
      if (p.contains("u_min")) {
        const Vec2 u = PairFrom(p.at("u_min"));
        c.planner.u_min = {u.x(), u.y()};
      }
      if (p.contains("u_max")) {
        const Vec2 u = PairFrom(p.at("u_max"));
        c.planner.u_max = {u.x(), u.y()};
      }
      ReadNum(p, "tol", c.planner.tol);
      ReadNum(p, "slack_weight", c.planner.slack_weight);
      ReadNum(p, "safety_margin", c.planner.safety_margin);
      c.planner.Validate();
    }
    if (j.contains("eval")) {
      const Json& e = j.at("eval");
      CheckKeys(e, "eval", {}, {"grid_res", "extent"});
      ReadNum(e, "grid_res", c.grid.resolution);
      if (e.contains("extent")) {
        const Vec2 x = PairFrom(e.at("extent"));
        c.grid.extent_x = x.x();
        c.grid.extent_y = x.y();
      }
      c.grid.Validate();
    }
    if (j.contains("fit")) {
      const Json& f = j.at("fit");
      CheckKeys(f, "fit", {}, {"steps", "lr"});
      if (f.contains("steps")) c.fit_steps = f.at("steps").get<int>();
      ReadNum(f, "lr", c.fit_lr);
      if (c.fit_steps < 0 || !(c.fit_lr >= 0.0)) {
        throw InvalidInput("fit settings out of range");
      }
    }
    return c;
  });
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path);
    out << content;
    if (!out.flush()) throw InvalidInput("cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInput("cannot write " + path);
  }
}

}  // namespace corridor
