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

#include "corridor/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "corridor/error.h"

namespace corridor {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view QpStatusName(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kSoftFallback:
      return "soft-fallback";
    case QpStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

void QpProblem::Validate() const {
  const Eigen::Index n = g.size();
  if (H.rows() != n || H.cols() != n) {
    throw InvalidInput("H must be n x n");
  }
  const auto check_block = [n](const MatrixXd& A, const VectorXd& b,
                               const char* name) {
    if (A.rows() != b.size()) {
      throw InvalidInput(std::string(name) + " rows and rhs differ");
    }
    if (A.rows() > 0 && A.cols() != n) {
      throw InvalidInput(std::string(name) + " must have n columns");
    }
    if (!A.allFinite() || !b.allFinite()) {
      throw InvalidInput(std::string(name) + " must be finite");
    }
  };
  check_block(A_eq, b_eq, "A_eq");
  check_block(A_in, b_in, "A_in");
  if (!H.allFinite() || !g.allFinite()) {
    throw InvalidInput("cost data must be finite");
  }
  const double scale = std::max(1.0, n > 0 ? H.cwiseAbs().maxCoeff() : 0.0);
  if (n > 0 && (H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("H must be symmetric");
  }
}

double QpProblem::Objective(const VectorXd& z) const {
  return 0.5 * z.dot(H * z) + g.dot(z);
}

double KktResiduals::Max() const {
  return std::max({stationarity, primal, complementarity});
}

KktResiduals ComputeKktResiduals(const QpProblem& p, const VectorXd& z,
                                 const VectorXd& nu, const VectorXd& lambda) {
  KktResiduals r;
  VectorXd grad = p.H * z + p.g;
  if (p.num_equalities() > 0) grad += p.A_eq.transpose() * nu;
  if (p.num_inequalities() > 0) grad += p.A_in.transpose() * lambda;
  r.stationarity = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
  if (p.num_equalities() > 0) {
    r.primal = (p.A_eq * z - p.b_eq).cwiseAbs().maxCoeff();
  }
  if (p.num_inequalities() > 0) {
    const VectorXd slack = p.b_in - p.A_in * z;
    r.primal = std::max(r.primal, std::max(0.0, -slack.minCoeff()));
    r.primal = std::max(r.primal, std::max(0.0, -lambda.minCoeff()));
    r.complementarity = lambda.cwiseProduct(slack).cwiseAbs().maxCoeff();
  }
  return r;
}

namespace {

struct ActiveSetOutcome {
  VectorXd w;
  VectorXd lambda;
  bool feasible = true;
  int iterations = 0;
};

// Goldfarb-Idnani dual active-set method for
//   min 1/2 w'Hw + g'w  s.t.  C w <= d,  H positive definite.
// Starts at the unconstrained minimum and adds the most violated row each
// pass, dropping rows whose multipliers would turn negative. The projections
// are rebuilt from a QR factorization of J' N_A at every step, which is cheap
// at the sizes this planner produces.
ActiveSetOutcome DualActiveSet(const Eigen::LLT<MatrixXd>& llt,
                               const VectorXd& g, const MatrixXd& C,
                               const VectorXd& d, double feas_tol) {
  const Eigen::Index k = g.size();
  const Eigen::Index m = d.size();
  ActiveSetOutcome out;
  out.w = -llt.solve(g);
  out.lambda = VectorXd::Zero(m);
  if (m == 0) return out;

  // H^-1 = J J'.
  const MatrixXd J = llt.matrixU().solve(MatrixXd::Identity(k, k));

  std::vector<int> active;
  std::vector<double> lam;
  std::vector<bool> is_active(m, false);
  const int max_iterations = 50 * static_cast<int>(m + k) + 100;

  while (out.iterations < max_iterations) {
    int p = -1;
    double worst = feas_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (is_active[i]) continue;
      const double viol = C.row(i).dot(out.w) - d(i);
      if (viol > worst) {
        worst = viol;
        p = static_cast<int>(i);
      }
    }
    if (p < 0) break;

    const VectorXd np = -C.row(p).transpose();
    const double bp = -d(p);
    double lam_p = 0.0;
    while (true) {
      ++out.iterations;
      if (out.iterations > max_iterations) break;
      const Eigen::Index q = static_cast<Eigen::Index>(active.size());
      const VectorXd v = J.transpose() * np;
      VectorXd dir, r, proj;
      if (q > 0) {
        MatrixXd N(k, q);
        for (Eigen::Index j = 0; j < q; ++j) N.col(j) = -C.row(active[j]).transpose();
        Eigen::HouseholderQR<MatrixXd> qr(J.transpose() * N);
        VectorXd y = qr.householderQ().adjoint() * v;
        r = qr.matrixQR()
                .topLeftCorner(q, q)
                .triangularView<Eigen::Upper>()
                .solve(y.head(q));
        proj = y.tail(k - q);
        y.head(q).setZero();
        dir = J * (qr.householderQ() * y);
      } else {
        proj = v;
        dir = J * v;
      }
      const double s_p = np.dot(out.w) - bp;

      double t1 = std::numeric_limits<double>::infinity();
      int drop = -1;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (r(j) > 0.0) {
          const double ratio = lam[j] / r(j);
          if (ratio < t1) {
            t1 = ratio;
            drop = static_cast<int>(j);
          }
        }
      }
      const double curvature = proj.squaredNorm();
      double t2 = std::numeric_limits<double>::infinity();
      if (curvature > 1e-24 * std::max(1.0, v.squaredNorm())) {
        t2 = std::max(0.0, -s_p / curvature);
      }
      const double t = std::min(t1, t2);
      if (!std::isfinite(t)) {
        out.feasible = false;
        return out;
      }
      for (Eigen::Index j = 0; j < q; ++j) {
        lam[j] = std::max(0.0, lam[j] - t * r(j));
      }
      lam_p += t;
      if (std::isfinite(t2)) out.w += t * dir;
      if (std::isfinite(t2) && t2 <= t1) {
        active.push_back(p);
        lam.push_back(lam_p);
        is_active[p] = true;
        break;
      }
      is_active[active[drop]] = false;
      active.erase(active.begin() + drop);
      lam.erase(lam.begin() + drop);
    }
  }
  for (size_t j = 0; j < active.size(); ++j) out.lambda(active[j]) = lam[j];
  return out;
}

// Proximal-point wrapper for a merely semidefinite reduced Hessian.
ActiveSetOutcome ProximalActiveSet(const MatrixXd& H, const VectorXd& g,
                                   const MatrixXd& C, const VectorXd& d,
                                   double feas_tol) {
  const Eigen::Index k = g.size();
  const double rho =
      1e-6 * std::max(1.0, k > 0 ? H.cwiseAbs().maxCoeff() : 0.0);
  const Eigen::LLT<MatrixXd> llt(H + rho * MatrixXd::Identity(k, k));
  VectorXd w = VectorXd::Zero(k);
  ActiveSetOutcome out;
  int total = 0;
  for (int outer = 0; outer < 2000; ++outer) {
    out = DualActiveSet(llt, g - rho * w, C, d, feas_tol);
    total += out.iterations;
    if (!out.feasible) break;
    const double step = (out.w - w).cwiseAbs().maxCoeff();
    w = out.w;
    if (step <= 1e-13 * (1.0 + w.cwiseAbs().maxCoeff())) break;
  }
  out.iterations = total;
  return out;
}

void Polish(const QpProblem& p, QpSolution& s) {
  const Eigen::Index n = p.num_variables();
  std::vector<int> active;
  for (int i = 0; i < p.num_inequalities(); ++i) {
    if (s.lambda(i) > 0.0) active.push_back(i);
  }
  const Eigen::Index me = p.num_equalities();
  const Eigen::Index q = static_cast<Eigen::Index>(active.size());
  MatrixXd K = MatrixXd::Zero(n + me + q, n + me + q);
  VectorXd rhs = VectorXd::Zero(n + me + q);
  K.topLeftCorner(n, n) = p.H;
  rhs.head(n) = -p.g;
  if (me > 0) {
    K.block(n, 0, me, n) = p.A_eq;
    K.block(0, n, n, me) = p.A_eq.transpose();
    rhs.segment(n, me) = p.b_eq;
  }
  for (Eigen::Index j = 0; j < q; ++j) {
    K.block(n + me + j, 0, 1, n) = p.A_in.row(active[j]);
    K.block(0, n + me + j, n, 1) = p.A_in.row(active[j]).transpose();
    rhs(n + me + j) = p.b_in(active[j]);
  }
  const Eigen::FullPivLU<MatrixXd> lu(K);
  if (!lu.isInvertible()) return;
  VectorXd sol = lu.solve(rhs);
  sol += lu.solve(rhs - K * sol);
  QpSolution cand = s;
  cand.z = sol.head(n);
  cand.nu = sol.segment(n, me);
  cand.lambda.setZero();
  for (Eigen::Index j = 0; j < q; ++j) {
    cand.lambda(active[j]) = sol(n + me + j);
  }
  const double before = ComputeKktResiduals(p, s.z, s.nu, s.lambda).Max();
  const double after =
      ComputeKktResiduals(p, cand.z, cand.nu, cand.lambda).Max();
  if (after < before) s = cand;
}

}  // namespace

QpSolution SolveQp(const QpProblem& p, double tol) {
  p.Validate();
  const Eigen::Index n = p.num_variables();
  const Eigen::Index me = p.num_equalities();
  const Eigen::Index mi = p.num_inequalities();
  const double h_scale = std::max(1.0, n > 0 ? p.H.cwiseAbs().maxCoeff() : 0.0);
  if (n > 0) {
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.H,
                                                      Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9 * h_scale) {
      throw InvalidInput("H must be positive semidefinite");
    }
  }

  QpSolution sol;
  sol.z = VectorXd::Zero(n);
  sol.nu = VectorXd::Zero(me);
  sol.lambda = VectorXd::Zero(mi);
  sol.status = QpStatus::kFailed;

  // z = z0 + Z w with A_eq Z = 0.
  VectorXd z0 = VectorXd::Zero(n);
  MatrixXd Z = MatrixXd::Identity(n, n);
  if (me > 0) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(p.A_eq.transpose());
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    const MatrixXd Q = qr.householderQ();
    Z = Q.rightCols(n - rank);
    z0 = p.A_eq.completeOrthogonalDecomposition().solve(p.b_eq);
    const double eq_err = (p.A_eq * z0 - p.b_eq).cwiseAbs().maxCoeff();
    if (eq_err > tol * (1.0 + p.b_eq.cwiseAbs().maxCoeff())) {
      sol.kkt_residual = eq_err;
      return sol;
    }
  }
  const MatrixXd Hr = Z.transpose() * p.H * Z;
  const VectorXd gr = Z.transpose() * (p.H * z0 + p.g);
  const MatrixXd C = mi > 0 ? MatrixXd(p.A_in * Z) : MatrixXd(0, Z.cols());
  const VectorXd d = mi > 0 ? VectorXd(p.b_in - p.A_in * z0) : VectorXd(0);
  const double feas_tol = 0.1 * tol;

  ActiveSetOutcome res;
  if (Z.cols() == 0) {
    res.w = VectorXd(0);
    res.lambda = VectorXd::Zero(mi);
    res.feasible = mi == 0 || d.minCoeff() >= -feas_tol;
  } else {
    const Eigen::LLT<MatrixXd> llt(Hr);
    const bool definite =
        llt.info() == Eigen::Success &&
        llt.matrixL().toDenseMatrix().diagonal().minCoeff() >
            1e-7 * std::sqrt(h_scale);
    res = definite ? DualActiveSet(llt, gr, C, d, feas_tol)
                   : ProximalActiveSet(Hr, gr, C, d, feas_tol);
  }
  sol.iterations = res.iterations;
  sol.z = z0 + Z * res.w;
  sol.lambda = res.lambda;
  if (me > 0) {
    VectorXd rhs = -(p.H * sol.z + p.g);
    if (mi > 0) rhs -= p.A_in.transpose() * sol.lambda;
    sol.nu = p.A_eq.transpose().completeOrthogonalDecomposition().solve(rhs);
  }
  if (!res.feasible) {
    sol.kkt_residual = ComputeKktResiduals(p, sol.z, sol.nu, sol.lambda).Max();
    return sol;
  }
  sol.kkt_residual = ComputeKktResiduals(p, sol.z, sol.nu, sol.lambda).Max();
  if (sol.kkt_residual > 1e-3 * tol) {
    Polish(p, sol);
    sol.kkt_residual = ComputeKktResiduals(p, sol.z, sol.nu, sol.lambda).Max();
  }
  sol.status = sol.kkt_residual <= tol ? QpStatus::kOptimal : QpStatus::kFailed;
  return sol;
}

QpSolution SolveQpSoft(const QpProblem& p, std::span<const int> slack_rows,
                       double slack_weight, double tol) {
  p.Validate();
  if (!(slack_weight > 0.0)) throw InvalidInput("slack weight must be positive");
  const Eigen::Index n = p.num_variables();
  const Eigen::Index me = p.num_equalities();
  const Eigen::Index mi = p.num_inequalities();
  const Eigen::Index ns = static_cast<Eigen::Index>(slack_rows.size());
  std::vector<bool> seen(mi, false);
  for (const int r : slack_rows) {
    if (r < 0 || r >= mi || seen[r]) {
      throw InvalidInput("slack rows must be distinct inequality indices");
    }
    seen[r] = true;
  }

  QpProblem ext;
  ext.H = MatrixXd::Zero(n + ns, n + ns);
  ext.H.topLeftCorner(n, n) = p.H;
  ext.H.bottomRightCorner(ns, ns) =
      2.0 * slack_weight * MatrixXd::Identity(ns, ns);
  ext.g = VectorXd::Zero(n + ns);
  ext.g.head(n) = p.g;
  ext.A_eq = MatrixXd::Zero(me, n + ns);
  if (me > 0) ext.A_eq.leftCols(n) = p.A_eq;
  ext.b_eq = p.b_eq;
  ext.A_in = MatrixXd::Zero(mi + ns, n + ns);
  if (mi > 0) ext.A_in.topLeftCorner(mi, n) = p.A_in;
  ext.b_in = VectorXd::Zero(mi + ns);
  ext.b_in.head(mi) = p.b_in;
  for (Eigen::Index j = 0; j < ns; ++j) {
    ext.A_in(slack_rows[j], n + j) = -1.0;
    ext.A_in(mi + j, n + j) = -1.0;
  }

  const QpSolution inner = SolveQp(ext, tol);
  QpSolution sol;
  sol.z = inner.z.head(n);
  sol.slack = inner.z.tail(ns);
  sol.nu = inner.nu;
  sol.lambda = inner.lambda.head(mi);
  sol.kkt_residual = inner.kkt_residual;
  sol.iterations = inner.iterations;
  sol.status = inner.status == QpStatus::kOptimal ? QpStatus::kSoftFallback
                                                  : QpStatus::kFailed;
  return sol;
}

QpGradients QpBackward(const QpProblem& p, const QpSolution& s,
                       const VectorXd& dl_dz, double margin) {
  if (s.status != QpStatus::kOptimal) {
    throw InvalidInput("backward requires an optimal hard solution");
  }
  p.Validate();
  const Eigen::Index n = p.num_variables();
  const Eigen::Index me = p.num_equalities();
  const Eigen::Index mi = p.num_inequalities();
  if (dl_dz.size() != n) throw InvalidInput("dL/dz has the wrong size");

  QpGradients out;
  std::vector<int> active;
  if (mi > 0) {
    const VectorXd slack = p.b_in - p.A_in * s.z;
    for (Eigen::Index i = 0; i < mi; ++i) {
      if (s.lambda(i) > margin) {
        active.push_back(static_cast<int>(i));
      } else if (std::abs(slack(i)) <= margin) {
        out.degenerate = true;
      }
    }
  }
  const Eigen::Index q = static_cast<Eigen::Index>(active.size());
  const Eigen::Index m = me + q;
  MatrixXd E(m, n);
  VectorXd mult(m);
  if (me > 0) {
    E.topRows(me) = p.A_eq;
    mult.head(me) = s.nu;
  }
  for (Eigen::Index j = 0; j < q; ++j) {
    E.row(me + j) = p.A_in.row(active[j]);
    mult(me + j) = s.lambda(active[j]);
  }
  MatrixXd K = MatrixXd::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = p.H;
  K.block(0, n, n, m) = E.transpose();
  K.block(n, 0, m, n) = E;
  VectorXd rhs = VectorXd::Zero(n + m);
  rhs.head(n) = dl_dz;

  VectorXd sol;
  const Eigen::FullPivLU<MatrixXd> lu(K);
  if (lu.isInvertible()) {
    sol = lu.solve(rhs);
  } else {
    sol = K.completeOrthogonalDecomposition().solve(rhs);
  }
  const VectorXd a = sol.head(n);
  const VectorXd c = sol.tail(m);

  out.dg = -a;
  out.dH = -0.5 * (a * s.z.transpose() + s.z * a.transpose());
  const MatrixXd dE = -(mult * a.transpose()) - c * s.z.transpose();
  out.dA_eq = me > 0 ? MatrixXd(dE.topRows(me)) : MatrixXd(0, n);
  out.db_eq = c.head(me);
  out.dA_in = MatrixXd::Zero(mi, n);
  out.db_in = VectorXd::Zero(mi);
  for (Eigen::Index j = 0; j < q; ++j) {
    out.dA_in.row(active[j]) = dE.row(me + j);
    out.db_in(active[j]) = c(me + j);
  }
  return out;
}

}  // namespace corridor
