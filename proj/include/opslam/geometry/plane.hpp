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
#ifndef OPSLAM_GEOMETRY_PLANE_HPP_
#define OPSLAM_GEOMETRY_PLANE_HPP_

#include <cmath>

#include "opslam/geometry/pose.hpp"

namespace opslam {

/// Infinite plane as a unit homogeneous 4-vector (nx, ny, nz, d) with
/// n.x + d = 0 for on-plane points x. Stored normalized (||coeffs|| = 1)
/// and sign-canonical: the first component with |value| > 1e-12 is positive.
struct Plane {
  Vec4 coeffs = Vec4(0, 0, 1, 0);

  Plane() = default;

  /// Normalizes and canonicalizes the given raw coefficients.
  explicit Plane(const Vec4& raw) { set(raw); }
  Plane(const Vec3& normal, double d) { set((Vec4() << normal, d).finished()); }

  /// Plane with the given (not necessarily unit) normal through a point.
  static Plane through_point(const Vec3& normal, const Vec3& point) {
    return Plane(normal, -normal.dot(point));
  }

  void set(const Vec4& raw) {
    coeffs = raw / raw.norm();
    for (int i = 0; i < 4; ++i) {
      if (std::abs(coeffs[i]) > 1e-12) {
        if (coeffs[i] < 0) coeffs = -coeffs;
        break;
      }
    }
  }

  Vec3 normal() const { return coeffs.head<3>(); }
  double offset() const { return coeffs[3]; }

  /// Metric signed distance of a point (rescales so ||normal|| = 1).
  double signed_distance(const Vec3& p) const {
    return (coeffs.head<3>().dot(p) + coeffs[3]) / coeffs.head<3>().norm();
  }

  /// Homogeneous plane equation value without metric rescaling.
  double evaluate(const Vec3& p) const {
    return coeffs.head<3>().dot(p) + coeffs[3];
  }
};

/// Axis-aligned plane under the Manhattan assumption: the normal equals a
/// signed world axis exactly and only the offset d is free
/// (normal.x + dist = 0 on the plane).
struct ManhattanPlane {
  enum class Axis { X = 0, Y = 1, Z = 2 };
  Axis axis = Axis::X;
  int sign = 1;  // +1 or -1
  double dist = 0.0;

  Vec3 normal() const {
    Vec3 n = Vec3::Zero();
    n[int(axis)] = double(sign);
    return n;
  }

  /// Unnormalized homogeneous coefficients (unit normal, free d).
  Vec4 raw_coeffs() const { return (Vec4() << normal(), dist).finished(); }

  Plane to_plane() const { return Plane(raw_coeffs()); }

  /// Snaps a general plane to the closest signed axis; requires the normal
  /// to be within `max_angle_rad` of that axis.
  static ManhattanPlane from_plane(const Plane& p, double max_angle_rad,
                                   bool* ok = nullptr) {
    const Vec3 n = p.normal().normalized();
    int best_axis = 0;
    double best_abs = 0;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(n[i]) > best_abs) {
        best_abs = std::abs(n[i]);
        best_axis = i;
      }
    }
    ManhattanPlane mp;
    mp.axis = Axis(best_axis);
    mp.sign = n[best_axis] >= 0 ? 1 : -1;
    // d rescaled to the unit-normal form of the plane.
    mp.dist = p.coeffs[3] / p.normal().norm();
    if (ok) *ok = std::acos(std::min(1.0, best_abs)) <= max_angle_rad;
    return mp;
  }
};

/// Angle between plane normals, insensitive to the stored sign, in radians.
inline double plane_normal_angle(const Vec3& na, const Vec3& nb) {
  const double c =
      std::abs(na.normalized().dot(nb.normalized()));
  return std::acos(std::min(1.0, c));
}

/// Expresses a world plane in the camera frame: pi_cam = T^T pi_world where
/// T is the camera-to-world homogeneous transform. Output is normalized and
/// sign-canonical; world points on the input plane, moved to the camera
/// frame, satisfy the output plane equation.
inline Plane transform_plane(const Pose& cam_pose, const Plane& world_plane) {
  const Vec3 n = world_plane.normal();
  const double d = world_plane.offset();
  Vec4 raw;
  raw.head<3>() = cam_pose.rotation.transpose() * n;
  raw[3] = cam_pose.translation.dot(n) + d;
  return Plane(raw);
}

namespace detail {

/// Plane 4-vector as quaternion: scalar part = d, vector part = n.
inline Quat plane_quat(const Vec4& v) {
  return Quat(v[3], v[0], v[1], v[2]);
}

/// 2 * vector part of log(q) for unit q with nonnegative scalar part.
inline Vec3 quat_log2(const Quat& q) {
  const Vec3 v(q.x(), q.y(), q.z());
  const double th = v.norm();
  if (th < 1e-12) return 2.0 * v;  // log(q) ~ v for w ~ 1
  const double phi = std::atan2(th, q.w());
  return (2.0 * phi / th) * v;
}

}  // namespace detail

/// Geodesic error between two normalized planes interpreted as unit
/// quaternions: 2 * vec(log(qa^-1 qb)) with antipodal sign handling.
/// Zero iff the planes are equal up to sign.
inline Vec3 plane_log_error(const Plane& pa, const Plane& pb) {
  const Quat qa = detail::plane_quat(pa.coeffs);
  const Quat qb = detail::plane_quat(pb.coeffs);
  Quat q = qa.conjugate() * qb;
  if (q.w() < 0) q.coeffs() = -q.coeffs();
  return detail::quat_log2(q);
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_PLANE_HPP_
