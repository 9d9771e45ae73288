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

// Command-line entry point. Every output file is written atomically and is
// accompanied by <out>.manifest.json naming the exact configuration used.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "corridor/annotation.h"
#include "corridor/error.h"
#include "corridor/eval.h"
#include "corridor/gradcheck.h"
#include "corridor/io.h"
#include "corridor/parallel.h"
#include "corridor/planner.h"
#include "corridor/render.h"
#include "corridor/scenario.h"
#include "corridor/scene.h"

namespace corridor {
namespace {

struct Options {
  std::string scene_path;
  std::vector<std::string> scene_paths;
  std::string corridor_path;
  std::string out_path;
  std::string config_path;
  std::string reference = "log";
  std::string kind = "straight";
  uint64_t seed = 0;
  int count = 50;
  int fit_count = 20;
  std::optional<int> steps;
  std::optional<double> lr;
  std::optional<double> grid_res;
};

using Clock = std::chrono::steady_clock;

RunConfig LoadConfig(const Options& o) {
  RunConfig c;
  if (!o.config_path.empty()) c = ConfigFromJson(ReadJsonFile(o.config_path));
  if (o.steps) c.fit_steps = *o.steps;
  if (o.lr) c.fit_lr = *o.lr;
  if (o.grid_res) c.grid.resolution = *o.grid_res;
  c.grid.Validate();
  if (c.fit_steps < 0 || !(c.fit_lr >= 0.0)) {
    throw InvalidInput("--steps and --lr must be non-negative");
  }
  return c;
}

// Planning-frame settings follow the scene.
PlannerConfig PlannerFor(const RunConfig& c, const Scene& s) {
  PlannerConfig p = c.planner;
  p.dt = s.dt;
  p.horizon = s.horizon;
  p.wheelbase = s.wheelbase;
  return p;
}

Scene LoadScene(const std::string& path) {
  return SceneFromJson(ReadJsonFile(path));
}

Corridor CorridorFor(const Options& o, const RunConfig& c, const Scene& s) {
  if (!o.corridor_path.empty()) {
    return CorridorFromJson(ReadJsonFile(o.corridor_path));
  }
  return AnnotateCorridor(s, c.annotation).corridor;
}

Trajectory ReferenceFor(const std::string& mode, const Scene& s,
                        uint64_t seed) {
  const Trajectory truth = GroundTruthFuture(s);
  if (mode == "log") return truth;
  if (mode == "curb-crossing") return CurbCrossingReference(s, truth);
  if (mode == "noisy") return NoisyReference(truth, seed, 1.0);
  throw InvalidInput("unknown reference mode '" + mode + "'");
}

void WriteOutput(const std::string& command, const Options& o,
                 const RunConfig& config, const std::string& content,
                 Clock::time_point start) {
  WriteFileAtomic(o.out_path, content);
  Json m;
  m["command"] = command;
  m["config"] = ConfigToJson(config);
  Json inputs = Json::object();
  if (!o.scene_path.empty()) inputs["scene"] = o.scene_path;
  if (!o.scene_paths.empty()) inputs["scenes"] = o.scene_paths;
  if (!o.corridor_path.empty()) inputs["corridor"] = o.corridor_path;
  if (!o.config_path.empty()) inputs["config"] = o.config_path;
  m["inputs"] = inputs;
  m["outputs"] = Json::array({o.out_path});
  m["seed"] = o.seed;
  m["kind"] = o.kind;
  m["reference"] = o.reference;
  m["wall_time_s"] =
      Round9(std::chrono::duration<double>(Clock::now() - start).count());
  WriteFileAtomic(o.out_path + ".manifest.json", DumpJson(m));
}

int RunGen(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  const Scene s = GenScene(o.seed, ParseSceneKind(o.kind));
  WriteOutput("gen", o, config, DumpJson(SceneToJson(s)), start);
  return 0;
}

int RunAnnotate(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  const Scene s = LoadScene(o.scene_path);
  const AnnotationResult r = AnnotateCorridor(s, config.annotation);
  if (r.flagged()) {
    std::cerr << "warning: " << r.failed.size()
              << " timestamp(s) fell back to the minimum rectangle\n";
  }
  WriteOutput("annotate", o, config, DumpJson(CorridorToJson(r.corridor)),
              start);
  return 0;
}

int RunRefine(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  const Scene s = LoadScene(o.scene_path);
  const Corridor predicted = CorridorFromJson(ReadJsonFile(o.corridor_path));
  const auto perceived = PlanningFrameObstacles(s, config.annotation);
  const Corridor refined = RefineCorridor(predicted, perceived);
  WriteOutput("refine", o, config, DumpJson(CorridorToJson(refined)), start);
  return 0;
}

int RunPlan(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  const Scene s = LoadScene(o.scene_path);
  const Corridor corridor = CorridorFromJson(ReadJsonFile(o.corridor_path));
  const PlanRequest req =
      MakePlanRequest(s, corridor, ReferenceFor(o.reference, s, o.seed));
  const PlannerConfig pc = PlannerFor(config, s);
  req.Validate(pc.horizon);
  const PlanResult r = Plan(req, pc);
  WriteOutput("plan", o, config, DumpJson(PlanResultToJson(r)), start);
  return 0;
}

struct EvalCase {
  Scene scene;
  Corridor corridor;
  Trajectory truth;
  PlanRequest request;
};

int RunEval(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  std::vector<EvalCase> cases;
  if (o.scene_paths.empty()) {
    for (SuiteCase& c : SafetySuite(o.count, o.seed)) {
      cases.push_back({c.scene, c.corridor, c.ground_truth, c.request});
    }
  } else {
    if (!o.corridor_path.empty() && o.scene_paths.size() != 1) {
      throw InvalidInput("--corridor needs exactly one --scene");
    }
    for (const std::string& path : o.scene_paths) {
      EvalCase c;
      c.scene = LoadScene(path);
      Options single = o;
      c.corridor = CorridorFor(single, config, c.scene);
      c.truth = GroundTruthFuture(c.scene);
      c.request = MakePlanRequest(c.scene, c.corridor,
                                  ReferenceFor(o.reference, c.scene, o.seed));
      cases.push_back(std::move(c));
    }
  }
  if (cases.empty()) throw InvalidInput("nothing to evaluate");

  const int n = static_cast<int>(cases.size());
  std::vector<PlanResult> plans(n);
  std::vector<CollisionFlags> opt_flags(n), ref_flags(n);
  ParallelFor(n, [&](int i) {
    plans[i] = Plan(cases[i].request, PlannerFor(config, cases[i].scene));
    opt_flags[i] = CollisionCheck(plans[i].trajectory, cases[i].scene, config.grid);
    ref_flags[i] =
        CollisionCheck(cases[i].request.reference, cases[i].scene, config.grid);
  });

  const int horizon = cases[0].scene.horizon;
  MetricsAccumulator optimized(horizon), reference(horizon);
  Json per_scene = Json::array();
  for (int i = 0; i < n; ++i) {
    optimized.Add(opt_flags[i], L2Metric(plans[i].trajectory, cases[i].truth),
                  plans[i].solve_time);
    reference.Add(ref_flags[i], L2Metric(cases[i].request.reference, cases[i].truth),
                  0.0);
    per_scene.push_back({{"status", std::string(PlanStatusName(plans[i].status))},
                         {"collisions_optimized", opt_flags[i].Count()},
                         {"collisions_reference", ref_flags[i].Count()}});
  }
  Json out;
  out["optimized"] = MetricsToJson(optimized.Report());
  out["reference"] = MetricsToJson(reference.Report());
  out["scenes"] = per_scene;
  WriteOutput("eval", o, config, DumpJson(out), start);
  return 0;
}

int RunGradcheck(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  Json out = Json::array();
  bool ok = true;
  for (const GradcheckReport& r : RunAllGradchecks(o.seed)) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.suite << ": " << r.cases
              << " cases, " << r.failures << " failures, max rel err "
              << r.max_rel_error << " (tol " << r.tolerance << ")\n";
    ok = ok && r.passed();
    out.push_back({{"suite", r.suite},
                   {"cases", r.cases},
                   {"failures", r.failures},
                   {"max_rel_error", Round9(r.max_rel_error)},
                   {"tolerance", r.tolerance}});
  }
  if (!o.out_path.empty()) WriteOutput("gradcheck", o, config, DumpJson(out), start);
  return ok ? 0 : 1;
}

int RunFit(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  const PlannerConfig pc = config.planner;  // synthetic scenes use defaults
  const auto data = FitDataset(o.fit_count, o.seed, ParseSceneKind(o.kind), pc);
  const FitResult fit = FitWeights(data, pc, config.fit_steps, config.fit_lr);
  Json out;
  out["q_diag"] = Json::array();
  for (double q : fit.q_diag) out["q_diag"].push_back(Round9(q));
  out["r_diag"] = Json::array();
  for (double r : fit.r_diag) out["r_diag"].push_back(Round9(r));
  out["loss_history"] = Json::array();
  for (double l : fit.loss_history) out["loss_history"].push_back(Round9(l));
  out["skipped"] = fit.skipped;
  std::cout << "loss " << fit.loss_history.front() << " -> "
            << fit.loss_history.back() << "\n";
  WriteOutput("fit", o, config, DumpJson(out), start);
  return 0;
}

int RunRender(const Options& o) {
  const auto start = Clock::now();
  const RunConfig config = LoadConfig(o);
  const Scene s = LoadScene(o.scene_path);
  const Corridor corridor = CorridorFor(o, config, s);
  const Trajectory reference = ReferenceFor(o.reference, s, o.seed);
  const PlanResult plan =
      Plan(MakePlanRequest(s, corridor, reference), PlannerFor(config, s));
  WriteOutput("render", o, config,
              RenderSvg(s, corridor, reference, plan.trajectory), start);
  return 0;
}

}  // namespace
}  // namespace corridor

int main(int argc, char** argv) {
  using namespace corridor;
  CLI::App app{"Safe-corridor annotation, planning and evaluation"};
  app.require_subcommand(1);
  Options o;

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON config file");
  };
  const auto add_reference = [&](CLI::App* sub) {
    sub->add_option("--reference", o.reference,
                    "reference trajectory: log, curb-crossing or noisy")
        ->check(CLI::IsMember({"log", "curb-crossing", "noisy"}));
    sub->add_option("--seed", o.seed, "seed for the noisy reference");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene");
  gen->add_option("--seed", o.seed, "scene seed");
  gen->add_option("--kind", o.kind, "straight, turn, cut-in or narrow")
      ->check(CLI::IsMember({"straight", "turn", "cut-in", "narrow"}));
  gen->add_option("--out", o.out_path, "scene file")->required();
  add_config(gen);

  CLI::App* annotate = app.add_subcommand("annotate", "scene to corridor");
  annotate->add_option("--scene", o.scene_path, "scene file")->required();
  annotate->add_option("--out", o.out_path, "corridor file")->required();
  add_config(annotate);

  CLI::App* refine =
      app.add_subcommand("refine", "shrink a corridor to exclude obstacles");
  refine->add_option("--scene", o.scene_path, "scene file")->required();
  refine->add_option("--corridor", o.corridor_path, "predicted corridor")
      ->required();
  refine->add_option("--out", o.out_path, "refined corridor file")->required();
  add_config(refine);

  CLI::App* plan = app.add_subcommand("plan", "plan inside a corridor");
  plan->add_option("--scene", o.scene_path, "scene file")->required();
  plan->add_option("--corridor", o.corridor_path, "corridor file")->required();
  plan->add_option("--out", o.out_path, "plan file")->required();
  add_reference(plan);
  add_config(plan);

  CLI::App* eval = app.add_subcommand(
      "eval", "collision rates and L2 of planned and reference trajectories");
  eval->add_option("--scene", o.scene_paths,
                   "scene files; without any, a curb-crossing suite is built");
  eval->add_option("--corridor", o.corridor_path, "corridor for a single scene");
  eval->add_option("--count", o.count, "suite size")->check(CLI::PositiveNumber);
  eval->add_option("--grid-res", o.grid_res, "checker cell size in meters");
  eval->add_option("--out", o.out_path, "metrics file")->required();
  add_reference(eval);
  add_config(eval);

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient suites");
  gradcheck->add_option("--seed", o.seed, "seed");
  gradcheck->add_option("--out", o.out_path, "report file");
  add_config(gradcheck);

  CLI::App* fit = app.add_subcommand("fit", "learn the cost weights");
  fit->add_option("--seed", o.seed, "first scene seed");
  fit->add_option("--kind", o.kind, "scene kind")
      ->check(CLI::IsMember({"straight", "turn", "cut-in", "narrow"}));
  fit->add_option("--count", o.fit_count, "number of scenes")
      ->check(CLI::PositiveNumber);
  fit->add_option("--steps", o.steps, "gradient steps");
  fit->add_option("--lr", o.lr, "learning rate");
  fit->add_option("--out", o.out_path, "weights file")->required();
  add_config(fit);

  CLI::App* render = app.add_subcommand("render", "SVG overlay of a scene");
  render->add_option("--scene", o.scene_path, "scene file")->required();
  render->add_option("--corridor", o.corridor_path,
                     "corridor file; annotated when absent");
  render->add_option("--out", o.out_path, "SVG file")->required();
  add_reference(render);
  add_config(render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*gen) return RunGen(o);
    if (*annotate) return RunAnnotate(o);
    if (*refine) return RunRefine(o);
    if (*plan) return RunPlan(o);
    if (*eval) return RunEval(o);
    if (*gradcheck) return RunGradcheck(o);
    if (*fit) return RunFit(o);
    if (*render) return RunRender(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
