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
#ifndef OPSLAM_GEOMETRY_POSE_HPP_
#define OPSLAM_GEOMETRY_POSE_HPP_

#include "opslam/geometry/so3.hpp"

namespace opslam {

/// Rigid transform. For camera poses the convention is body-to-world:
/// p_world = rotation * p_body + translation, so translation is the camera
/// center in world coordinates. Object poses are object-to-world.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Pose() = default;
  Pose(const Mat3& R, const Vec3& t) : rotation(R), translation(t) {}

  static Pose identity() { return Pose(); }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_inverse(const Vec3& p) const {
    return rotation.transpose() * (p - translation);
  }

  Pose inverse() const {
    return Pose(rotation.transpose(),
                -(rotation.transpose() * translation));
  }

  Pose compose(const Pose& other) const {  // this * other
    return Pose(rotation * other.rotation,
                rotation * other.translation + translation);
  }
  Pose operator*(const Pose& other) const { return compose(other); }

  /// `other` expressed relative to this pose: this^-1 * other.
  Pose relative_to(const Pose& other) const { return inverse() * other; }

  /// Right-perturbed retraction used by the solver: R <- R Exp(w),
  /// t <- t + dt with dt in world coordinates.
  Pose retract(const Vec3& dt, const Vec3& w) const {
    return Pose(orthonormalize(rotation * so3_exp(w)), translation + dt);
  }

  Quat quaternion() const {
    Quat q(rotation);
    q.normalize();
    return q;
  }
};

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_POSE_HPP_
