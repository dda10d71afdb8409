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
#ifndef OPSLAM_TESTS_TEST_UTIL_HPP_
#define OPSLAM_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "opslam/core/rng.hpp"
#include "opslam/estimation/graph.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"
#include "opslam/geometry/so3.hpp"

namespace opslam {
namespace testutil {

/// Membership test written independently of the library's clipping code.
/// A positive margin grows the box; a negative one shrinks it (strict
/// interior test).
inline bool cuboid_contains(const Cuboid& c, const Vec3& p,
                            double margin = 0.0) {
  const Vec3 l = c.pose.apply_inverse(p);
  const Vec3 h = 0.5 * c.dims;
  return std::abs(l.x()) <= h.x() + margin &&
         std::abs(l.y()) <= h.y() + margin && std::abs(l.z()) <= h.z() + margin;
}

/// Voxel-sampling IoU oracle: a regular grid over the joint axis-aligned
/// bounding box, `n` cells per axis.
inline double voxel_iou(const Cuboid& a, const Cuboid& b, int n = 64) {
  Vec3 lo(1e30, 1e30, 1e30), hi(-1e30, -1e30, -1e30);
  for (const Vec3& p : a.corners()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (const Vec3& p : b.corners()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  long in_a = 0, in_b = 0, in_both = 0;
  const Vec3 step = (hi - lo) / double(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 p = lo + Vec3((i + 0.5) * step.x(), (j + 0.5) * step.y(),
                                 (k + 0.5) * step.z());
        const bool ia = cuboid_contains(a, p);
        const bool ib = cuboid_contains(b, p);
        in_a += ia;
        in_b += ib;
        in_both += ia && ib;
      }
    }
  }
  const long uni = in_a + in_b - in_both;
  return uni > 0 ? double(in_both) / double(uni) : 0.0;
}

/// Voxel oracle for the occluded (negative-side) volume fraction: grid over
/// the cuboid's own local box, so every sample is inside the cuboid.
inline double voxel_occluded_ratio(const Cuboid& c, const Plane& p,
                                   int n = 64) {
  long neg = 0;
  const Vec3 h = 0.5 * c.dims;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 local(-h.x() + (i + 0.5) * c.dims.x() / n,
                         -h.y() + (j + 0.5) * c.dims.y() / n,
                         -h.z() + (k + 0.5) * c.dims.z() / n);
        if (p.evaluate(c.pose.apply(local)) < 0) ++neg;
      }
    }
  }
  return double(neg) / (double(n) * n * n);
}

inline Cuboid random_upright_cuboid(Rng* rng, double span = 3.0) {
  const Vec3 t(rng->uniform(-span, span), rng->uniform(-span, span),
               rng->uniform(0.2, 1.5));
  const Vec3 dims(rng->uniform(0.3, 1.5), rng->uniform(0.3, 1.5),
                  rng->uniform(0.3, 1.5));
  return Cuboid(Pose(yaw_rotation(rng->uniform(-M_PI, M_PI)), t), dims);
}

inline Pose random_pose(Rng* rng, double span = 2.0) {
  const Vec3 w(rng->uniform(-1.0, 1.0), rng->uniform(-1.0, 1.0),
               rng->uniform(-1.0, 1.0));
  const Vec3 t(rng->uniform(-span, span), rng->uniform(-span, span),
               rng->uniform(-span, span));
  return Pose(so3_exp(w), t);
}

inline Plane random_plane(Rng* rng) {
  Vec3 n = rng->gauss3(1.0);
  while (n.norm() < 1e-3) n = Vec3(rng->gauss(0, 1.0), rng->gauss(0, 1.0), 1.0);
  return Plane((Vec4() << n, rng->uniform(-3.0, 3.0)).finished());
}

/// Largest scaled relative deviation between the analytic Jacobians of `f`
/// and central finite differences over every free tangent coordinate.
/// Returns a negative value when any evaluation is degenerate (ok=false).
inline double factor_jacobian_fd_error(const FactorGraph& graph,
                                       const Factor& f, double step = 1e-6) {
  const FactorEval base = graph.evaluate(f, true);
  if (!base.ok) return -1.0;
  double worst = 0.0;
  const int slots[2] = {f.v0, f.v1};
  for (int s = 0; s < 2; ++s) {
    const int vi = slots[s];
    if (vi < 0) continue;
    const MatX& jac = s == 0 ? base.j0 : base.j1;
    const int dof = graph.vertices[vi].dof();
    for (int k = 0; k < dof; ++k) {
      VecX delta = VecX::Zero(dof);
      FactorGraph plus = graph;
      delta[k] = step;
      plus.vertices[vi].retract(delta);
      FactorGraph minus = graph;
      delta[k] = -step;
      minus.vertices[vi].retract(delta);
      const FactorEval ep = plus.evaluate(f, false);
      const FactorEval em = minus.evaluate(f, false);
      if (!ep.ok || !em.ok) return -1.0;
      const VecX fd = (ep.residual - em.residual) / (2.0 * step);
      for (int r = 0; r < fd.size(); ++r) {
        const double an = jac(r, k);
        const double err =
            std::abs(fd[r] - an) / std::max(1.0, std::abs(an) + std::abs(fd[r]));
        worst = std::max(worst, err);
      }
    }
  }
  return worst;
}

/// Spearman rank correlation.
inline double spearman(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const int n = int(x.size());
  auto ranks = [&](const std::vector<double>& v) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[idx[i]] = i;
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double num = 0, dx = 0, dy = 0;
  for (int i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace testutil
}  // namespace opslam

#endif  // OPSLAM_TESTS_TEST_UTIL_HPP_
