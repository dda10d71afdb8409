/******************************************************************************
 * Copyright 2026 The opslam Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/
#ifndef OPSLAM_ESTIMATION_SOLVER_HPP_
#define OPSLAM_ESTIMATION_SOLVER_HPP_

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "opslam/estimation/graph.hpp"

namespace opslam {

struct SolverConfig {
  int max_iters = 20;
  double initial_lambda = 1e-4;
  double lambda_up = 10.0;
  double lambda_down = 0.5;
  double rel_decrease_tol = 1e-8;
  double grad_tol = 1e-10;
  int max_reject_streak = 20;
};

struct OptimizeResult {
  bool converged = false;
  int iterations = 0;
  double final_cost = 0.0;
  std::vector<double> cost_trace;  // accepted costs, starting at the initial
};

namespace detail {

/// Per-residual-row information diagonal; priors weight their rotation rows
/// separately.
inline VecX factor_information(const Factor& f) {
  const int dim = residual_dim(f.kind);
  VecX w = VecX::Constant(dim, f.weight);
  if (f.kind == FactorKind::PosePrior || f.kind == FactorKind::OdometryPrior) {
    w.tail<3>().setConstant(f.rot_weight);
  }
  return w;
}

/// Huber-robustified cost of one factor evaluation.
inline double factor_cost(const Factor& f, const VecX& r) {
  const VecX w = factor_information(f);
  const double quad = r.dot(w.asDiagonal() * r);
  const double norm = r.norm();
  if (norm <= f.huber_delta || norm <= 0) return quad;
  // Scales the weighted quadratic by huber(norm)/norm^2 so a scalar weight
  // reproduces w * huber(norm) exactly.
  const double huber = f.huber_delta * (2.0 * norm - f.huber_delta);
  return quad * huber / (norm * norm);
}

struct VertexLayout {
  // Tangent offsets: points get their own block ordering (Schur side),
  // every other active vertex goes into the reduced system.
  std::vector<int> reduced_offset;  // -1 if fixed or a point
  std::vector<int> point_index;     // -1 if not an active point
  std::vector<int> point_vertex;    // point index -> vertex id
  int reduced_dim = 0;

  explicit VertexLayout(const std::vector<Vertex>& vx) {
    reduced_offset.assign(vx.size(), -1);
    point_index.assign(vx.size(), -1);
    for (size_t i = 0; i < vx.size(); ++i) {
      if (vx[i].fixed) continue;
      if (vx[i].kind == VertexKind::Point3) {
        point_index[i] = int(point_vertex.size());
        point_vertex.push_back(int(i));
      } else {
        reduced_offset[i] = reduced_dim;
        reduced_dim += vx[i].dof();
      }
    }
  }
};

struct PointBlock {
  Mat3 h = Mat3::Zero();
  Vec3 g = Vec3::Zero();
  // Cross terms against reduced-system vertices sharing a factor.
  std::vector<std::pair<int, MatX>> cross;  // (reduced offset, dof x 3)

  MatX* cross_block(int offset, int dof) {
    for (auto& [off, m] : cross) {
      if (off == offset) return &m;
    }
    cross.emplace_back(offset, MatX::Zero(dof, 3));
    return &cross.back().second;
  }
};

}  // namespace detail

inline double total_cost(const FactorGraph& graph) {
  double cost = 0.0;
  for (const auto& f : graph.factors) {
    if (f.disabled) continue;
    const FactorEval ev = graph.evaluate(f, false);
    if (!ev.ok) continue;
    cost += detail::factor_cost(f, ev.residual);
  }
  return cost;
}

/// Levenberg-Marquardt with a Schur complement over point landmarks and a
/// dense Cholesky solve of the reduced camera/object/plane system.
inline OptimizeResult optimize(FactorGraph& graph,
                               const SolverConfig& cfg = SolverConfig()) {
  // Structural gauge check: a free camera pose needs an anchor.
  bool has_free_pose = false;
  bool has_anchor = false;
  for (const auto& v : graph.vertices) {
    if (v.kind == VertexKind::CameraPose) {
      if (v.fixed) {
        has_anchor = true;
      } else {
        has_free_pose = true;
      }
    }
  }
  for (const auto& f : graph.factors) {
    if (f.kind == FactorKind::PosePrior && !f.disabled) has_anchor = true;
  }
  if (has_free_pose && !has_anchor) {
    throw SingularSystem("optimize: no fixed pose and no pose prior");
  }

  const detail::VertexLayout layout(graph.vertices);
  const int na = layout.reduced_dim;
  const int np = int(layout.point_vertex.size());

  OptimizeResult result;
  double cost = total_cost(graph);
  result.cost_trace.push_back(cost);
  double lambda = cfg.initial_lambda;
  int solve_failures = 0;

  MatX a(na, na);
  VecX ga(na);
  std::vector<detail::PointBlock> points(np);

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    result.iterations = iter + 1;
    a.setZero();
    ga.setZero();
    for (auto& p : points) p = detail::PointBlock();

    // Linearize all enabled factors.
    for (auto& f : graph.factors) {
      if (f.disabled) continue;
      const FactorEval ev = graph.evaluate(f, true);
      if (!ev.ok) {
        if (++f.degenerate_streak >= 3) f.disabled = true;
        continue;
      }
      f.degenerate_streak = 0;
      VecX w = detail::factor_information(f);
      const double norm = ev.residual.norm();
      if (norm > f.huber_delta) w *= f.huber_delta / norm;

      struct Entry {
        int offset;  // reduced offset or point index
        bool is_point;
        const MatX* jac;
        int dof;
      };
      std::vector<Entry> entries;
      const int vids[2] = {f.v0, f.v1};
      const MatX* jacs[2] = {&ev.j0, &ev.j1};
      for (int s = 0; s < 2; ++s) {
        if (vids[s] < 0) continue;
        const Vertex& v = graph.vertices[vids[s]];
        if (v.fixed) continue;
        if (layout.point_index[vids[s]] >= 0) {
          entries.push_back({layout.point_index[vids[s]], true,
                             jacs[s], 3});
        } else {
          entries.push_back({layout.reduced_offset[vids[s]], false,
                             jacs[s], v.dof()});
        }
      }
      for (const auto& ea : entries) {
        const VecX gseg = ea.jac->transpose() * (w.asDiagonal() * ev.residual);
        if (ea.is_point) {
          points[ea.offset].g += gseg;
        } else {
          ga.segment(ea.offset, ea.dof) += gseg;
        }
        for (const auto& eb : entries) {
          const MatX h = ea.jac->transpose() * (w.asDiagonal() * (*eb.jac));
          if (ea.is_point && eb.is_point) {
            points[ea.offset].h += h;
          } else if (!ea.is_point && !eb.is_point) {
            a.block(ea.offset, eb.offset, ea.dof, eb.dof) += h;
          } else if (!ea.is_point && eb.is_point) {
            *points[eb.offset].cross_block(ea.offset, ea.dof) += h;
          }
          // point-reduced handled by the symmetric reduced-point case
        }
      }
    }

    // Gradient-based convergence test.
    double grad_inf = ga.size() ? ga.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& p : points) {
      grad_inf = std::max(grad_inf, p.g.cwiseAbs().maxCoeff());
    }
    if (grad_inf < cfg.grad_tol) {
      result.converged = true;
      break;
    }

    // Inner damping loop: retry the same linearization at larger lambda
    // until a step reduces the cost.
    bool accepted = false;
    for (int attempt = 0; attempt < cfg.max_reject_streak; ++attempt) {
      MatX s = a;
      for (int i = 0; i < na; ++i) {
        s(i, i) += lambda * std::max(a(i, i), 1e-12);
      }
      VecX rhs = -ga;
      std::vector<Mat3> dinv(np);
      bool numeric_ok = true;
      for (int p = 0; p < np; ++p) {
        Mat3 d = points[p].h;
        for (int i = 0; i < 3; ++i) {
          d(i, i) += lambda * std::max(points[p].h(i, i), 1e-12);
        }
        const double det = d.determinant();
        if (!std::isfinite(det) || std::abs(det) < 1e-300) {
          numeric_ok = false;
          break;
        }
        dinv[p] = d.inverse();
        const Vec3 dg = dinv[p] * points[p].g;
        for (const auto& [off_a, ma] : points[p].cross) {
          rhs.segment(off_a, ma.rows()) += ma * dg;
          for (const auto& [off_b, mb] : points[p].cross) {
            s.block(off_a, off_b, ma.rows(), mb.rows()) -=
                ma * dinv[p] * mb.transpose();
          }
        }
      }

      VecX xa = VecX::Zero(na);
      if (numeric_ok && na > 0) {
        Eigen::LDLT<MatX> ldlt(s);
        xa = ldlt.solve(rhs);
        numeric_ok = ldlt.info() == Eigen::Success && xa.allFinite();
      }
      if (!numeric_ok) {
        lambda *= cfg.lambda_up;
        if (++solve_failures >= 3) {
          throw SingularSystem("optimize: normal equations not solvable");
        }
        continue;
      }
      solve_failures = 0;

      // Back-substitute points and apply the trial update.
      std::vector<Vertex> backup = graph.vertices;
      for (int p = 0; p < np; ++p) {
        VecX gp = points[p].g;
        for (const auto& [off_a, ma] : points[p].cross) {
          gp += ma.transpose() * xa.segment(off_a, ma.rows());
        }
        const Vec3 xp = -dinv[p] * gp;
        graph.vertices[layout.point_vertex[p]].retract(xp);
      }
      for (size_t i = 0; i < graph.vertices.size(); ++i) {
        const int off = layout.reduced_offset[i];
        if (off < 0) continue;
        graph.vertices[i].retract(xa.segment(off, graph.vertices[i].dof()));
      }

      const double trial = total_cost(graph);
      if (std::isfinite(trial) && trial < cost) {
        const double decrease = cost - trial;
        cost = trial;
        result.cost_trace.push_back(cost);
        lambda = std::max(lambda * cfg.lambda_down, 1e-12);
        accepted = true;
        if (decrease < cfg.rel_decrease_tol * std::max(cost, 1e-300)) {
          result.converged = true;
        }
        break;
      }
      graph.vertices = std::move(backup);
      lambda *= cfg.lambda_up;
    }
    if (!accepted) {
      // No improving step at any damping: treat as converged to a local
      // minimum of the robustified cost.
      result.converged = true;
      break;
    }
    if (result.converged) break;
  }

  result.final_cost = cost;
  return result;
}

}  // namespace opslam

#endif  // OPSLAM_ESTIMATION_SOLVER_HPP_
