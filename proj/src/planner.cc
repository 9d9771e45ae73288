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

#include "corridor/planner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>

#include "corridor/error.h"
#include "corridor/losses.h"
#include "corridor/parallel.h"

namespace corridor {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

bool AllFinite(const EgoState& x) {
  return std::isfinite(x.px) && std::isfinite(x.py) &&
         std::isfinite(x.theta) && std::isfinite(x.v);
}

std::vector<Vec2> Positions(std::span<const EgoState> traj) {
  std::vector<Vec2> out;
  out.reserve(traj.size());
  for (const EgoState& x : traj) out.emplace_back(x.px, x.py);
  return out;
}

}  // namespace

void PlannerConfig::Validate() const {
  for (const double q : q_diag) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      throw InvalidInput("tracking weights must be finite and >= 0");
    }
  }
  for (const double r : r_diag) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw InvalidInput("effort weights must be finite and > 0");
    }
  }
  if (!(u_min.a < u_max.a) || !(u_min.delta < u_max.delta)) {
    throw InvalidInput("control bounds must satisfy u_min < u_max");
  }
  if (std::max(std::abs(u_min.delta), std::abs(u_max.delta)) >= kPi / 2) {
    throw InvalidInput("steering bounds must stay inside (-pi/2, pi/2)");
  }
  if (!(dt > 0.0) || !(wheelbase > 0.0) || horizon < 1) {
    throw InvalidInput("dt, wheelbase and horizon must be positive");
  }
  if (!(tol > 0.0) || !(slack_weight > 0.0) || !(safety_margin >= 0.0)) {
    throw InvalidInput("tol and slack weight must be positive");
  }
}

void PlanRequest::Validate(int horizon) const {
  if (static_cast<int>(reference.size()) != horizon) {
    throw InvalidInput("reference length must equal the horizon");
  }
  if (static_cast<int>(corridor.size()) != horizon) {
    throw InvalidInput("corridor length must equal the horizon");
  }
  if (!AllFinite(x_init)) throw InvalidInput("x_init must be finite");
  for (const EgoState& x : reference) {
    if (!AllFinite(x)) throw InvalidInput("reference must be finite");
  }
  for (const OrientedRect& r : corridor.rects) ValidateRect(r);
  ValidateFootprint(footprint);
}

std::string_view PlanStatusName(PlanStatus status) {
  switch (status) {
    case PlanStatus::kOptimal:
      return "optimal";
    case PlanStatus::kSoftFallback:
      return "soft-fallback";
    case PlanStatus::kReferencePassthrough:
      return "reference-passthrough";
  }
  return "unknown";
}

AssembledQp AssembleDetailed(const PlanRequest& req, const PlannerConfig& cfg) {
  cfg.Validate();
  req.Validate(cfg.horizon);
  const int N = cfg.horizon;
  const int n = 6 * N;
  AssembledQp out;

  // Heading differences are taken on the circle.
  out.reference = req.reference;
  double prev = req.x_init.theta;
  for (EgoState& x : out.reference) {
    x.theta = prev + WrapAngle(x.theta - prev);
    prev = x.theta;
  }

  QpProblem& p = out.problem;
  p.H = MatrixXd::Zero(n, n);
  p.g = VectorXd::Zero(n);
  for (int t = 1; t <= N; ++t) {
    const int i = StateIndex(t);
    const Eigen::Vector4d ref = out.reference[t - 1].ToVector();
    for (int k = 0; k < 4; ++k) {
      p.H(i + k, i + k) = 2.0 * cfg.q_diag[k];
      p.g(i + k) = -2.0 * cfg.q_diag[k] * ref(k);
    }
  }
  for (int t = 0; t < N; ++t) {
    const int j = ControlIndex(N, t);
    p.H(j, j) = 2.0 * cfg.r_diag[0];
    p.H(j + 1, j + 1) = 2.0 * cfg.r_diag[1];
  }

  // x_{t+1} - A_t x_t - B_t u_t = c_t; x_0 is fixed.
  p.A_eq = MatrixXd::Zero(4 * N, n);
  p.b_eq = VectorXd::Zero(4 * N);
  // Nominal states: x_init, then reference poses with speeds differenced
  // from the reference positions. Nominal controls are zero.
  std::vector<EgoState> nominal(N);
  nominal[0] = req.x_init;
  for (int t = 1; t < N; ++t) {
    nominal[t] = out.reference[t - 1];
    const EgoState& a = out.reference[t - 1];
    const EgoState& b = out.reference[t];
    nominal[t].v = std::hypot(b.px - a.px, b.py - a.py) / cfg.dt;
  }
  out.models.reserve(N);
  for (int t = 0; t < N; ++t) {
    const LinearDynamics lin =
        Linearize(nominal[t], Control{}, cfg.dt, cfg.wheelbase);
    out.models.push_back(lin);
    const int r = 4 * t;
    p.A_eq.block<4, 4>(r, StateIndex(t + 1)) = Eigen::Matrix4d::Identity();
    p.A_eq.block<4, 2>(r, ControlIndex(N, t)) = -lin.B;
    if (t == 0) {
      p.b_eq.segment<4>(r) = lin.A * req.x_init.ToVector() + lin.c;
    } else {
      p.A_eq.block<4, 4>(r, StateIndex(t)) = -lin.A;
      p.b_eq.segment<4>(r) = lin.c;
    }
  }

  const int corridor_rows = CorridorRowCount(N);
  p.A_in = MatrixXd::Zero(corridor_rows + 4 * N, n);
  p.b_in = VectorXd::Zero(corridor_rows + 4 * N);
  int row = 0;
  for (int t = 1; t <= N; ++t) {
    const auto rows =
        FootprintConstraintRows(RectToHalfspaces(req.corridor.rects[t - 1]),
                                req.footprint, out.reference[t - 1].theta);
    const int i = StateIndex(t);
    for (const StateConstraintRow& c : rows) {
      p.A_in(row, i) = c.c_px;
      p.A_in(row, i + 1) = c.c_py;
      p.A_in(row, i + 2) = c.c_theta;
      p.b_in(row) = c.b - cfg.safety_margin;
      ++row;
    }
  }
  for (int t = 0; t < N; ++t) {
    const int j = ControlIndex(N, t);
    p.A_in(row, j) = 1.0;
    p.b_in(row++) = cfg.u_max.a;
    p.A_in(row, j + 1) = 1.0;
    p.b_in(row++) = cfg.u_max.delta;
    p.A_in(row, j) = -1.0;
    p.b_in(row++) = -cfg.u_min.a;
    p.A_in(row, j + 1) = -1.0;
    p.b_in(row++) = -cfg.u_min.delta;
  }
  return out;
}

QpProblem Assemble(const PlanRequest& req, const PlannerConfig& cfg) {
  return AssembleDetailed(req, cfg).problem;
}

namespace {

ControlSequence ExtractControls(const VectorXd& z, int horizon) {
  ControlSequence u(horizon);
  for (int t = 0; t < horizon; ++t) {
    const int j = ControlIndex(horizon, t);
    u[t] = {z(j), z(j + 1)};
  }
  return u;
}

}  // namespace

PlanResult Plan(const PlanRequest& req, const PlannerConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  PlanResult result;
  try {
    const QpProblem p = Assemble(req, cfg);
    QpSolution sol = SolveQp(p, cfg.tol);
    result.status = PlanStatus::kOptimal;
    if (sol.status != QpStatus::kOptimal) {
      std::vector<int> rows(CorridorRowCount(cfg.horizon));
      for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
      sol = SolveQpSoft(p, rows, cfg.slack_weight, cfg.tol);
      result.status = PlanStatus::kSoftFallback;
    }
    if (sol.status == QpStatus::kFailed) {
      throw InvalidInput("no feasible control sequence");
    }
    result.controls = ExtractControls(sol.z, cfg.horizon);
    result.trajectory =
        Rollout(req.x_init, result.controls, cfg.dt, cfg.wheelbase);
  } catch (const std::exception&) {
    result.status = PlanStatus::kReferencePassthrough;
    result.trajectory = req.reference;
    result.controls.assign(std::max(cfg.horizon, 0), Control{});
  }
  result.solve_time = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return result;
}

PlanGradients ImitationGradient(const PlanRequest& req,
                                const PlannerConfig& cfg,
                                std::span<const EgoState> demonstration,
                                const PlanGradientSwitches& switches) {
  const AssembledQp qp = AssembleDetailed(req, cfg);
  const int N = cfg.horizon;
  if (static_cast<int>(demonstration.size()) != N) {
    throw InvalidInput("demonstration length must equal the horizon");
  }
  const QpSolution sol = SolveQp(qp.problem, cfg.tol);
  if (sol.status != QpStatus::kOptimal) {
    throw InvalidInput("imitation gradient needs an optimal hard solve");
  }
  const ControlSequence controls = ExtractControls(sol.z, N);
  const Trajectory traj = Rollout(req.x_init, controls, cfg.dt, cfg.wheelbase);
  const std::vector<Vec2> pos = Positions(traj);
  const std::vector<Vec2> gt = Positions(demonstration);
  const LossValue loss = ImitationLoss(pos, gt);

  PlanGradients out;
  out.loss = loss.value;
  out.d_reference.assign(N, Eigen::Vector4d::Zero());
  out.d_corridor.assign(N, Eigen::Matrix<double, 5, 1>::Zero());

  // Adjoint of the nonlinear rollout; the solution's state block does not
  // reach the loss.
  VectorXd dl_dz = VectorXd::Zero(qp.problem.num_variables());
  Eigen::Vector4d adj = Eigen::Vector4d::Zero();
  for (int t = N; t >= 1; --t) {
    adj(0) += loss.gradient(2 * (t - 1));
    adj(1) += loss.gradient(2 * (t - 1) + 1);
    const EgoState& prev = t == 1 ? req.x_init : traj[t - 2];
    const LinearDynamics jac =
        Linearize(prev, controls[t - 1], cfg.dt, cfg.wheelbase);
    dl_dz.segment<2>(ControlIndex(N, t - 1)) = jac.B.transpose() * adj;
    adj = jac.A.transpose() * adj;
  }

  const QpGradients grad = QpBackward(qp.problem, sol, dl_dz);
  out.degenerate = grad.degenerate;

  if (switches.weights) {
    for (int t = 1; t <= N; ++t) {
      const int i = StateIndex(t);
      const Eigen::Vector4d ref = qp.reference[t - 1].ToVector();
      for (int k = 0; k < 4; ++k) {
        out.d_q[k] += 2.0 * grad.dH(i + k, i + k) - 2.0 * ref(k) * grad.dg(i + k);
      }
    }
    for (int t = 0; t < N; ++t) {
      const int j = ControlIndex(N, t);
      out.d_r[0] += 2.0 * grad.dH(j, j);
      out.d_r[1] += 2.0 * grad.dH(j + 1, j + 1);
    }
  }

  if (switches.reference) {
    for (int t = 1; t <= N; ++t) {
      const int i = StateIndex(t);
      for (int k = 0; k < 4; ++k) {
        out.d_reference[t - 1](k) = -2.0 * cfg.q_diag[k] * grad.dg(i + k);
      }
    }
  }

  if (switches.corridor) {
    const auto vertices = FootprintVertices(req.footprint);
    for (int t = 1; t <= N; ++t) {
      const OrientedRect& rect = req.corridor.rects[t - 1];
      const HalfspaceSet hs = RectToHalfspaces(rect);
      const double th = qp.reference[t - 1].theta;
      const int i = StateIndex(t);
      Eigen::Matrix<double, 5, 1>& d = out.d_corridor[t - 1];
      for (int h = 0; h < 4; ++h) {
        const Vec2 a(hs.rows[h].ax, hs.rows[h].ay);
        Vec2 d_a = Vec2::Zero();
        double d_b = 0.0;
        for (int k = 0; k < 4; ++k) {
          const int row = 16 * (t - 1) + 4 * h + k;
          const Vec2 w0 = Rotate(vertices[k], th);
          const Vec2 w1(-w0.y(), w0.x());
          const Vec2 g_a(grad.dA_in(row, i), grad.dA_in(row, i + 1));
          const double g_k = grad.dA_in(row, i + 2);
          const double g_b = grad.db_in(row);
          d_a += g_a + g_k * w1 + g_b * (th * w1 - w0);
          d_b += g_b;
        }
        // b = a . c + half extent, a rotates with the rectangle heading.
        d_a += d_b * rect.center();
        d.head<2>() += d_b * a;
        d(2) += d_a.dot(Vec2(-a.y(), a.x()));
        d(h < 2 ? 3 : 4) += 0.5 * d_b;
      }
    }
  }
  return out;
}

double ImitationLossOfPlan(const PlanRequest& req, const PlannerConfig& cfg,
                           std::span<const EgoState> demonstration) {
  const PlanResult plan = Plan(req, cfg);
  return ImitationLoss(Positions(plan.trajectory), Positions(demonstration))
      .value;
}

FitResult FitWeights(std::span<const FitSample> dataset,
                     const PlannerConfig& cfg, int steps, double lr) {
  if (dataset.empty()) throw InvalidInput("fit dataset is empty");
  if (steps < 0 || !(lr >= 0.0)) {
    throw InvalidInput("steps and learning rate must be non-negative");
  }
  cfg.Validate();
  FitResult fit;
  fit.q_diag = cfg.q_diag;
  fit.r_diag = cfg.r_diag;
  const int count = static_cast<int>(dataset.size());
  std::vector<PlanGradients> grads(count);
  std::vector<char> ok(count);

  for (int step = 0; step <= steps; ++step) {
    PlannerConfig current = cfg;
    current.q_diag = fit.q_diag;
    current.r_diag = fit.r_diag;
    const PlanGradientSwitches weights_only{true, false, false};
    ParallelFor(count, [&](int s) {
      try {
        grads[s] = ImitationGradient(dataset[s].request, current,
                                     dataset[s].demonstration, weights_only);
        ok[s] = 1;
      } catch (const std::exception&) {
        ok[s] = 0;
      }
    });
    // Summed in sample order so results do not depend on threading.
    double loss = 0.0;
    std::array<double, 4> dq{};
    std::array<double, 2> dr{};
    int used = 0;
    for (int s = 0; s < count; ++s) {
      if (!ok[s]) {
        ++fit.skipped;
        continue;
      }
      ++used;
      loss += grads[s].loss;
      for (int k = 0; k < 4; ++k) dq[k] += grads[s].d_q[k];
      for (int k = 0; k < 2; ++k) dr[k] += grads[s].d_r[k];
    }
    if (used == 0) {
      fit.loss_history.push_back(std::nan(""));
      break;
    }
    fit.loss_history.push_back(loss / used);
    if (step == steps) break;
    for (int k = 0; k < 4; ++k) {
      fit.q_diag[k] = std::max(0.0, fit.q_diag[k] - lr * dq[k] / used);
    }
    for (int k = 0; k < 2; ++k) {
      fit.r_diag[k] =
          std::max(kMinEffortWeight, fit.r_diag[k] - lr * dr[k] / used);
    }
  }
  return fit;
}

}  // namespace corridor
