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

#include "corridor/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "corridor/losses.h"
#include "corridor/planner.h"
#include "corridor/qp.h"
#include "corridor/rng.h"
#include "corridor/scenario.h"

namespace corridor {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double RelativeError(const VectorXd& analytic, const VectorXd& numeric) {
  const double scale =
      std::max({analytic.norm(), numeric.norm(), 1e-12});
  return (analytic - numeric).norm() / scale;
}

VectorXd CentralDifference(const std::function<double(const VectorXd&)>& f,
                           const VectorXd& x, double h) {
  VectorXd g(x.size());
  VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    const double up = f(xp);
    xp(i) = x(i) - h;
    const double down = f(xp);
    xp(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

constexpr int kHorizon = 6;
constexpr double kTieGap = 1e-3;

void Record(GradcheckReport& r, double err) {
  ++r.cases;
  r.max_rel_error = std::max(r.max_rel_error, err);
  if (!(err < r.tolerance)) ++r.failures;
}

VectorXd RandomEncoding(Rng& rng) {
  VectorXd e(kEncodingStride * kHorizon);
  for (int t = 0; t < kHorizon; ++t) {
    const double th = rng.Uniform(-0.6, 0.6);
    const double scale = rng.Uniform(0.8, 1.2);  // off the unit circle
    e.segment<6>(kEncodingStride * t) << rng.Uniform(-5.0, 20.0),
        rng.Uniform(-3.0, 3.0), scale * std::cos(th), scale * std::sin(th),
        rng.Uniform(4.0, 20.0), rng.Uniform(2.0, 8.0);
  }
  return e;
}

// Signed distances of p to the four edges of rectangle t, positive inside.
std::array<double, 4> EdgeDistances(const Vec2& p, const VectorXd& e, int t) {
  const auto r = e.segment<6>(kEncodingStride * t);
  const double th = std::atan2(r(3), r(2));
  const Vec2 local = Rotate(p - Vec2(r(0), r(1)), -th);
  return {0.5 * r(4) - local.x(), 0.5 * r(4) + local.x(),
          0.5 * r(5) - local.y(), 0.5 * r(5) + local.y()};
}

// Points away from every edge, a unique deepest point per timestamp and a
// unique nearest edge for it.
bool WellSeparated(const std::vector<std::vector<Vec2>>& pts,
                   const VectorXd& e) {
  for (int t = 0; t < kHorizon; ++t) {
    std::vector<double> depths;
    for (const Vec2& p : pts[t]) {
      auto d = EdgeDistances(p, e, t);
      for (double x : d) {
        if (std::abs(x) < kTieGap) return false;
      }
      std::sort(d.begin(), d.end());
      if (d[0] > 0.0) {
        if (d[1] - d[0] < kTieGap) return false;
        depths.push_back(d[0]);
      }
    }
    std::sort(depths.rbegin(), depths.rend());
    if (depths.size() > 1 && depths[0] - depths[1] < kTieGap) return false;
  }
  return true;
}

std::vector<std::vector<Vec2>> PointsAround(Rng& rng, const VectorXd& e,
                                            int count) {
  std::vector<std::vector<Vec2>> out(kHorizon);
  for (int t = 0; t < kHorizon; ++t) {
    const auto r = e.segment<6>(kEncodingStride * t);
    const double th = std::atan2(r(3), r(2));
    for (int k = 0; k < count; ++k) {
      const Vec2 local(rng.Uniform(-0.7, 0.7) * r(4), rng.Uniform(-0.7, 0.7) * r(5));
      out[t].push_back(Vec2(r(0), r(1)) + Rotate(local, th));
    }
  }
  return out;
}

bool AwayFromKinks(const VectorXd& a, const VectorXd& b) {
  return ((a - b).cwiseAbs().array() > kTieGap).all();
}

std::vector<Vec2> AsPoints(const VectorXd& v) {
  std::vector<Vec2> out;
  for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) out.emplace_back(v(i), v(i + 1));
  return out;
}

}  // namespace

GradcheckReport CheckLossGradients(int configs, uint64_t seed) {
  GradcheckReport r{"losses", 0, 0, 0.0, 1e-5};
  Rng rng(seed);
  const double h = kFiniteDifferenceStep;
  for (int c = 0; c < configs; ++c) {
    VectorXd enc, gt;
    do {
      enc = RandomEncoding(rng);
      gt = RandomEncoding(rng);
    } while (!AwayFromKinks(enc, gt));
    const auto f_corr = [&](const VectorXd& x) { return CorridorLoss(x, gt).value; };
    Record(r, RelativeError(CorridorLoss(enc, gt).gradient,
                            CentralDifference(f_corr, enc, h)));

    CurbPoints curbs;
    do {
      enc = RandomEncoding(rng);
      curbs.per_t = PointsAround(rng, enc, 10);
    } while (!WellSeparated(curbs.per_t, enc));
    const auto f_map = [&](const VectorXd& x) { return MapSafetyLoss(x, curbs).value; };
    Record(r, RelativeError(MapSafetyLoss(enc, curbs).gradient,
                            CentralDifference(f_map, enc, h)));

    AgentVertices agents;
    do {
      enc = RandomEncoding(rng);
      agents.per_t = PointsAround(rng, enc, 8);
    } while (!WellSeparated(agents.per_t, enc));
    const auto f_agent = [&](const VectorXd& x) {
      return AgentSafetyLoss(x, agents).value;
    };
    Record(r, RelativeError(AgentSafetyLoss(enc, agents).gradient,
                            CentralDifference(f_agent, enc, h)));

    enc = RandomEncoding(rng);
    for (int t = 0; t < kHorizon; ++t) {  // keep exp(-alpha l w) away from 0
      enc(kEncodingStride * t + 4) = rng.Uniform(1.0, 4.0);
      enc(kEncodingStride * t + 5) = rng.Uniform(1.0, 3.0);
    }
    const double alpha = rng.Uniform(0.05, 0.3);
    const auto f_area = [&](const VectorXd& x) { return AreaLoss(x, alpha).value; };
    Record(r, RelativeError(AreaLoss(enc, alpha).gradient,
                            CentralDifference(f_area, enc, h)));

    VectorXd traj(2 * kHorizon), demo(2 * kHorizon);
    do {
      for (int i = 0; i < 2 * kHorizon; ++i) {
        traj(i) = rng.Uniform(-10.0, 30.0);
        demo(i) = rng.Uniform(-10.0, 30.0);
      }
    } while (!AwayFromKinks(traj, demo));
    const auto demo_pts = AsPoints(demo);
    const auto f_im = [&](const VectorXd& x) {
      return ImitationLoss(AsPoints(x), demo_pts).value;
    };
    Record(r, RelativeError(ImitationLoss(AsPoints(traj), demo_pts).gradient,
                            CentralDifference(f_im, traj, h)));
  }
  return r;
}

namespace {

// Random strictly convex QP whose solution has a clear active set.
bool RandomQp(Rng& rng, QpProblem& p, QpSolution& s) {
  const int n = rng.Int(2, 6);
  const int me = rng.Int(0, std::min(2, n - 1));
  const int mi = rng.Int(1, 8);
  MatrixXd M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = rng.Uniform(-1.0, 1.0);
  }
  p.H = M * M.transpose() + 0.5 * MatrixXd::Identity(n, n);
  p.g = VectorXd(n);
  for (int i = 0; i < n; ++i) p.g(i) = rng.Uniform(-2.0, 2.0);
  p.A_eq = MatrixXd(me, n);
  p.b_eq = VectorXd(me);
  for (int i = 0; i < me; ++i) {
    for (int j = 0; j < n; ++j) p.A_eq(i, j) = rng.Uniform(-1.0, 1.0);
    p.b_eq(i) = rng.Uniform(-1.0, 1.0);
  }
  p.A_in = MatrixXd(mi, n);
  p.b_in = VectorXd(mi);
  for (int i = 0; i < mi; ++i) {
    for (int j = 0; j < n; ++j) p.A_in(i, j) = rng.Uniform(-1.0, 1.0);
    p.b_in(i) = rng.Uniform(-0.5, 1.0);
  }
  s = SolveQp(p);
  if (s.status != QpStatus::kOptimal) return false;
  const VectorXd slack = p.b_in - p.A_in * s.z;
  for (int i = 0; i < mi; ++i) {
    const bool active = s.lambda(i) > 1e-4;
    const bool tight = std::abs(slack(i)) < 1e-9;
    if (active != tight) return false;
    if (!active && slack(i) < 1e-4) return false;
  }
  return true;
}

}  // namespace

GradcheckReport CheckQpGradients(int problems, uint64_t seed) {
  GradcheckReport r{"qp-backward", 0, 0, 0.0, 1e-4};
  Rng rng(seed);
  const double h = kFiniteDifferenceStep;
  for (int c = 0; c < problems; ++c) {
    QpProblem p;
    QpSolution s;
    while (!RandomQp(rng, p, s)) {
    }
    const int n = p.num_variables();
    const int mi = p.num_inequalities();
    VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.Uniform(-1.0, 1.0);
    const QpGradients grad = QpBackward(p, s, w);

    // Parameters: g, b_in, diag(H), A_in entries.
    const int np = n + mi + n + mi * n;
    VectorXd x(np), analytic(np);
    x << p.g, p.b_in, p.H.diagonal(), p.A_in.reshaped();
    analytic << grad.dg, grad.db_in, grad.dH.diagonal(), grad.dA_in.reshaped();
    const auto f = [&](const VectorXd& v) {
      QpProblem q = p;
      q.g = v.segment(0, n);
      q.b_in = v.segment(n, mi);
      q.H.diagonal() = v.segment(n + mi, n);
      q.A_in = v.segment(2 * n + mi, mi * n).reshaped(mi, n);
      return w.dot(SolveQp(q).z);
    };
    bool inactive_exact = true;
    const VectorXd slack = p.b_in - p.A_in * s.z;
    for (int i = 0; i < mi; ++i) {
      if (slack(i) > 1e-4 && grad.db_in(i) != 0.0) inactive_exact = false;
    }
    const double err = RelativeError(analytic, CentralDifference(f, x, h));
    Record(r, inactive_exact ? err : 1.0);
  }
  return r;
}

GradcheckReport CheckPlanGradients(int scenes, uint64_t seed) {
  GradcheckReport r{"plan-weights", 0, 0, 0.0, 1e-3};
  const PlannerConfig cfg;
  const auto data = FitDataset(scenes, seed, SceneKind::kCutIn, cfg);
  for (const FitSample& s : data) {
    const PlanGradients g =
        ImitationGradient(s.request, cfg, s.demonstration, {true, false, false});
    VectorXd x(6), analytic(6);
    x << cfg.q_diag[0], cfg.q_diag[1], cfg.q_diag[2], cfg.q_diag[3],
        cfg.r_diag[0], cfg.r_diag[1];
    analytic << g.d_q[0], g.d_q[1], g.d_q[2], g.d_q[3], g.d_r[0], g.d_r[1];
    const auto f = [&](const VectorXd& v) {
      PlannerConfig c = cfg;
      for (int k = 0; k < 4; ++k) c.q_diag[k] = v(k);
      for (int k = 0; k < 2; ++k) c.r_diag[k] = v(4 + k);
      return ImitationLossOfPlan(s.request, c, s.demonstration);
    };
    Record(r, RelativeError(analytic,
                            CentralDifference(f, x, kFiniteDifferenceStep)));
  }
  return r;
}

std::vector<GradcheckReport> RunAllGradchecks(uint64_t seed) {
  return {CheckLossGradients(50, seed), CheckQpGradients(50, seed + 1),
          CheckPlanGradients(10, seed + 2)};
}

}  // namespace corridor
