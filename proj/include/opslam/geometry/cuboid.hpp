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
#ifndef OPSLAM_GEOMETRY_CUBOID_HPP_
#define OPSLAM_GEOMETRY_CUBOID_HPP_

#include <array>
#include <cmath>

#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/pose.hpp"
#include "opslam/geometry/so3.hpp"

namespace opslam {

/// Oriented box: pose maps box frame to world, dims are full side lengths.
struct Cuboid {
  Pose pose;
  Vec3 dims = Vec3(1, 1, 1);

  Cuboid() = default;
  Cuboid(const Pose& p, const Vec3& d) : pose(p), dims(d) {}

  double volume() const { return dims.prod(); }

  /// Corner i: bit 0 -> +x/-x, bit 1 -> +y/-y, bit 2 -> +z/-z (set = +).
  Vec3 corner(int i) const {
    const Vec3 h = 0.5 * dims;
    const Vec3 local((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                     (i & 4) ? h.z() : -h.z());
    return pose.apply(local);
  }

  std::array<Vec3, 8> corners() const {
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i) out[i] = corner(i);
    return out;
  }

  /// Angle between the box z axis and world up.
  double tilt() const {
    const double c = pose.rotation.col(2).dot(Vec3::UnitZ());
    return std::acos(std::min(1.0, std::max(-1.0, c)));
  }

  bool is_upright(double tol = 1e-6) const { return tilt() <= tol; }

  double yaw() const { return yaw_of(pose.rotation); }

  /// Same center and dims, rotation replaced by its nearest pure yaw.
  Cuboid snapped_to_yaw() const {
    Cuboid c = *this;
    c.pose.rotation = yaw_rotation(yaw());
    return c;
  }

  /// Height interval [z_min, z_max] of an upright box.
  void height_range(double* z_min, double* z_max) const {
    *z_min = pose.translation.z() - 0.5 * dims.z();
    *z_max = pose.translation.z() + 0.5 * dims.z();
  }

  /// Ground-plane footprint corners of an upright box, counterclockwise.
  std::array<Vec2, 4> footprint() const {
    const double cy = std::cos(yaw()), sy = std::sin(yaw());
    const double hx = 0.5 * dims.x(), hy = 0.5 * dims.y();
    const Vec2 c = pose.translation.head<2>();
    const Vec2 ex(cy, sy), ey(-sy, cy);
    return {c - hx * ex - hy * ey, c + hx * ex - hy * ey,
            c + hx * ex + hy * ey, c - hx * ex + hy * ey};
  }
};

/// Axis-aligned image bounding box of the projected corners. Throws
/// BehindCamera if any corner lands at or behind the camera plane.
inline BBox2D project_cuboid_bbox(const CameraIntrinsics& intr,
                                  const Pose& cam_pose, const Cuboid& box) {
  Vec2 lo(1e30, 1e30), hi(-1e30, -1e30);
  for (int i = 0; i < 8; ++i) {
    const Vec3 pc = cam_pose.apply_inverse(box.corner(i));
    if (pc.z() <= 1e-9) throw BehindCamera("cuboid corner behind camera");
    const Vec2 uv = intr.project(pc);
    lo = lo.cwiseMin(uv);
    hi = hi.cwiseMax(uv);
  }
  return BBox2D::from_min_max(lo, hi);
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_CUBOID_HPP_
