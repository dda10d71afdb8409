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
#ifndef OPSLAM_ESTIMATION_JACOBIANS_HPP_
#define OPSLAM_ESTIMATION_JACOBIANS_HPP_

#include <cmath>

#include "opslam/geometry/so3.hpp"

namespace opslam {

using Mat2x3 = Eigen::Matrix<double, 2, 3>;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;
using Mat46 = Eigen::Matrix<double, 4, 6>;

/// d(x/|x|)/dx = (I - u u^T)/|x| with u = x/|x|.
inline Mat4 normalize_jacobian(const Vec4& x) {
  const double n = x.norm();
  const Vec4 u = x / n;
  return (Mat4::Identity() - u * u.transpose()) / n;
}

namespace quat {

// 4-vector quaternion layout [w, x, y, z] for the matrix algebra below.

/// Plane coefficients (n, d) as quaternion components (w = d, vec = n).
inline Vec4 from_plane(const Vec4& pi) {
  return Vec4(pi[3], pi[0], pi[1], pi[2]);
}

/// Permutation matrix of from_plane.
inline Mat4 plane_perm() {
  Mat4 p = Mat4::Zero();
  p(0, 3) = 1;
  p(1, 0) = 1;
  p(2, 1) = 1;
  p(3, 2) = 1;
  return p;
}

/// Hamilton product p * q = left(p) q.
inline Mat4 left(const Vec4& p) {
  Mat4 m;
  const double w = p[0];
  const Vec3 v = p.tail<3>();
  m(0, 0) = w;
  m.block<1, 3>(0, 1) = -v.transpose();
  m.block<3, 1>(1, 0) = v;
  m.block<3, 3>(1, 1) = w * Mat3::Identity() + skew(v);
  return m;
}

/// Hamilton product p * q = right(q) p.
inline Mat4 right(const Vec4& q) {
  Mat4 m;
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  m(0, 0) = w;
  m.block<1, 3>(0, 1) = -v.transpose();
  m.block<3, 1>(1, 0) = v;
  m.block<3, 3>(1, 1) = w * Mat3::Identity() - skew(v);
  return m;
}

inline Mat4 conj_matrix() {
  Mat4 c = Mat4::Identity();
  c(1, 1) = c(2, 2) = c(3, 3) = -1;
  return c;
}

/// 2 * vector part of log(q), with d/dq. Input need not be exactly unit.
inline Vec3 log2_with_jacobian(const Vec4& q, Mat34* jac) {
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  const double s = v.norm();
  const double n2 = s * s + w * w;
  Vec3 e;
  if (s < 1e-8) {
    const double g = 2.0 / w - 2.0 * s * s / (3.0 * w * w * w);
    e = g * v;
    if (jac) {
      jac->col(0) = -2.0 * v / n2;
      jac->block<3, 3>(0, 1) =
          g * Mat3::Identity() - (4.0 / (3.0 * w * w * w)) * v * v.transpose();
    }
    return e;
  }
  const double phi = std::atan2(s, w);
  const double g = 2.0 * phi / s;
  e = g * v;
  if (jac) {
    jac->col(0) = -2.0 * v / n2;
    const double dg_ds_over_s = 2.0 * (w * s / n2 - phi) / (s * s * s);
    jac->block<3, 3>(0, 1) =
        g * Mat3::Identity() + dg_ds_over_s * v * v.transpose();
  }
  return e;
}

}  // namespace quat

/// Quaternion-log error between two normalized plane 4-vectors, with
/// Jacobians with respect to the raw (n, d) coefficient layouts. Matches
/// plane_log_error in value; signs are handled by a fixed branch per call.
inline Vec3 plane_log_error_with_jacobian(const Vec4& pa, const Vec4& pb,
                                          Mat34* j_pa, Mat34* j_pb) {
  const Mat4 perm = quat::plane_perm();
  const Mat4 conj = quat::conj_matrix();
  const Vec4 qa = quat::from_plane(pa);
  const Vec4 qb = quat::from_plane(pb);
  Vec4 qe = quat::left(conj * qa) * qb;
  const double sign = qe[0] < 0 ? -1.0 : 1.0;
  qe *= sign;
  Mat34 j_qe;
  const Vec3 e = quat::log2_with_jacobian(qe, &j_qe);
  if (j_pa) *j_pa = sign * j_qe * quat::right(qb) * conj * perm;
  if (j_pb) *j_pb = sign * j_qe * quat::left(conj * qa) * perm;
  return e;
}

}  // namespace opslam

#endif  // OPSLAM_ESTIMATION_JACOBIANS_HPP_
