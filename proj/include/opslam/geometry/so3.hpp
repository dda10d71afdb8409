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
#ifndef OPSLAM_GEOMETRY_SO3_HPP_
#define OPSLAM_GEOMETRY_SO3_HPP_

#include <cmath>

#include "opslam/core/types.hpp"

namespace opslam {

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

/// Rodrigues exponential map so(3) -> SO(3).
inline Mat3 so3_exp(const Vec3& w) {
  const double th = w.norm();
  if (th < 1e-10) {
    const Mat3 W = skew(w);
    return Mat3::Identity() + W + 0.5 * W * W;
  }
  const Vec3 a = w / th;
  const Mat3 A = skew(a);
  return Mat3::Identity() + std::sin(th) * A + (1.0 - std::cos(th)) * A * A;
}

/// Logarithm map SO(3) -> so(3).
inline Vec3 so3_log(const Mat3& R) {
  const double tr = R.trace();
  double c = 0.5 * (tr - 1.0);
  c = std::min(1.0, std::max(-1.0, c));
  const double th = std::acos(c);
  if (th < 1e-10) {
    return 0.5 * Vec3(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  }
  if (th > kPi - 1e-6) {
    // Near pi: extract axis from the symmetric part.
    Vec3 axis;
    const Mat3 S = 0.5 * (R + Mat3::Identity());
    int k;
    S.diagonal().maxCoeff(&k);
    axis = S.col(k) / std::sqrt(std::max(S(k, k), 1e-12));
    axis.normalize();
    // Fix sign using the antisymmetric part.
    const Vec3 w(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
    if (w.dot(axis) < 0) axis = -axis;
    return th * axis;
  }
  const double s = std::sin(th);
  return (th / (2.0 * s)) *
         Vec3(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
}

/// Inverse of the right Jacobian of SO(3); used by pose prior factors.
inline Mat3 so3_right_jacobian_inv(const Vec3& w) {
  const double th = w.norm();
  const Mat3 W = skew(w);
  if (th < 1e-6) {
    return Mat3::Identity() + 0.5 * W + (1.0 / 12.0) * W * W;
  }
  const double a = 1.0 / (th * th) -
                   (1.0 + std::cos(th)) / (2.0 * th * std::sin(th));
  return Mat3::Identity() + 0.5 * W + a * W * W;
}

/// Re-orthonormalize a near-rotation matrix (polar projection via quaternions).
inline Mat3 orthonormalize(const Mat3& R) {
  Quat q(R);
  q.normalize();
  return q.toRotationMatrix();
}

/// Rotation about world z by yaw radians.
inline Mat3 yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
}

/// Yaw of the rotation's x-axis projected to the horizontal plane.
inline double yaw_of(const Mat3& R) {
  return std::atan2(R(1, 0), R(0, 0));
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_SO3_HPP_
