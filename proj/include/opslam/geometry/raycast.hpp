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
#ifndef OPSLAM_GEOMETRY_RAYCAST_HPP_
#define OPSLAM_GEOMETRY_RAYCAST_HPP_

#include <algorithm>
#include <cmath>

#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"

namespace opslam {

constexpr double kMinStructureDepth = 0.1;
constexpr double kMaxStructureDepth = 50.0;

/// Intersection of the back-projected pixel ray with a plane, both in the
/// camera frame: P = (-d / n.(K^-1 p)) K^-1 p.
inline Vec3 backproject_to_ground(const CameraIntrinsics& K, const Vec2& pixel,
                                  const Plane& ground_in_cam) {
  const Vec3 ray = K.unproject(pixel);
  const double denom = ground_in_cam.normal().dot(ray);
  if (std::abs(denom) <= 1e-9) {
    throw DegenerateRay("backproject_to_ground: ray parallel to plane");
  }
  const double t = -ground_in_cam.offset() / denom;
  if (t <= 0) {
    throw DegenerateRay("backproject_to_ground: intersection behind camera");
  }
  return t * ray;
}

/// Vertical wall plane, in the camera frame, through the two ground points
/// back-projected from a wall-ground image edge.
inline Plane observed_wall_plane(const CameraIntrinsics& K,
                                 const Pose& cam_pose,
                                 const GroundEdge2D& edge,
                                 const Plane& world_ground) {
  const Plane ground_cam = transform_plane(cam_pose, world_ground);
  const Vec3 p0 = backproject_to_ground(K, edge.p0, ground_cam);
  const Vec3 p1 = backproject_to_ground(K, edge.p1, ground_cam);
  if ((p1 - p0).norm() < 1e-6) {
    throw DegenerateEdge("observed_wall_plane: coincident ground points");
  }
  const Vec3 up = ground_cam.normal().normalized();
  const Vec3 normal = (p1 - p0).cross(up);
  if (normal.norm() < 1e-12) {
    throw DegenerateEdge("observed_wall_plane: edge parallel to up");
  }
  return Plane::through_point(normal, p0);
}

namespace detail {

/// Slab intersection of a local-frame ray with the box |x_i| <= h_i.
/// Returns false on a miss, else the entry/exit parameters.
inline bool ray_box_range(const Vec3& origin, const Vec3& dir, const Vec3& h,
                          double* t0, double* t1) {
  double lo = -1e30, hi = 1e30;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(dir[i]) < 1e-15) {
      if (origin[i] < -h[i] || origin[i] > h[i]) return false;
      continue;
    }
    double a = (-h[i] - origin[i]) / dir[i];
    double b = (h[i] - origin[i]) / dir[i];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  if (lo > hi) return false;
  *t0 = lo;
  *t1 = hi;
  return true;
}

}  // namespace detail

/// Depth (camera-frame z) at which the pixel ray first hits the plane.
inline double ray_structure_depth(const CameraIntrinsics& K,
                                  const Pose& cam_pose, const Vec2& pixel,
                                  const Plane& world_plane) {
  const Vec3 dir = cam_pose.rotation * K.unproject(pixel);
  const double denom = world_plane.normal().dot(dir);
  if (std::abs(denom) <= 1e-12) {
    throw NoIntersection("ray_structure_depth: ray parallel to plane");
  }
  const double t = -world_plane.evaluate(cam_pose.translation) / denom;
  if (t <= kMinStructureDepth || t >= kMaxStructureDepth) {
    throw NoIntersection("ray_structure_depth: depth out of range");
  }
  return t;
}

/// Depth (camera-frame z) at which the pixel ray first hits the cuboid.
inline double ray_structure_depth(const CameraIntrinsics& K,
                                  const Pose& cam_pose, const Vec2& pixel,
                                  const Cuboid& box) {
  const Vec3 dir_w = cam_pose.rotation * K.unproject(pixel);
  const Vec3 o = box.pose.apply_inverse(cam_pose.translation);
  const Vec3 d = box.pose.rotation.transpose() * dir_w;
  double t0, t1;
  if (!detail::ray_box_range(o, d, 0.5 * box.dims, &t0, &t1)) {
    throw NoIntersection("ray_structure_depth: ray misses cuboid");
  }
  const double t = t0 > 0 ? t0 : t1;
  if (t <= kMinStructureDepth || t >= kMaxStructureDepth) {
    throw NoIntersection("ray_structure_depth: depth out of range");
  }
  return t;
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_RAYCAST_HPP_
