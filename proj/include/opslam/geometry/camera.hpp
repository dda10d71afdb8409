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
#ifndef OPSLAM_GEOMETRY_CAMERA_HPP_
#define OPSLAM_GEOMETRY_CAMERA_HPP_

#include "opslam/geometry/pose.hpp"

namespace opslam {

/// Pinhole camera. Camera frame: +z forward, +x right, +y down.
struct CameraIntrinsics {
  double fx = 500.0, fy = 500.0;
  double cx = 320.0, cy = 240.0;
  int width = 640, height = 480;

  /// Pixel of a camera-frame point (depth must be positive).
  Vec2 project(const Vec3& pc) const {
    return Vec2(fx * pc.x() / pc.z() + cx, fy * pc.y() / pc.z() + cy);
  }

  /// Ray through a pixel, z component fixed to 1 (K^-1 applied to the
  /// homogeneous pixel).
  Vec3 unproject(const Vec2& px) const {
    return Vec3((px.x() - cx) / fx, (px.y() - cy) / fy, 1.0);
  }

  bool in_image(const Vec2& px, double margin = 0.0) const {
    return px.x() >= margin && px.x() <= width - 1 - margin &&
           px.y() >= margin && px.y() <= height - 1 - margin;
  }

  /// 2x3 Jacobian of project() w.r.t. the camera-frame point.
  Eigen::Matrix<double, 2, 3> project_jacobian(const Vec3& pc) const {
    const double iz = 1.0 / pc.z();
    Eigen::Matrix<double, 2, 3> J;
    J << fx * iz, 0, -fx * pc.x() * iz * iz,
         0, fy * iz, -fy * pc.y() * iz * iz;
    return J;
  }
};

/// Axis-aligned 2D box stored as center and full size, in pixels.
struct BBox2D {
  Vec2 center = Vec2::Zero();
  Vec2 size = Vec2::Zero();

  static BBox2D from_min_max(const Vec2& mn, const Vec2& mx) {
    BBox2D b;
    b.center = 0.5 * (mn + mx);
    b.size = mx - mn;
    return b;
  }
  Vec2 min_corner() const { return center - 0.5 * size; }
  Vec2 max_corner() const { return center + 0.5 * size; }
  double area() const { return size.x() * size.y(); }

  bool contains(const Vec2& px) const {
    const Vec2 mn = min_corner(), mx = max_corner();
    return px.x() >= mn.x() && px.x() <= mx.x() && px.y() >= mn.y() &&
           px.y() <= mx.y();
  }

  double iou(const BBox2D& o) const {
    const Vec2 mn = min_corner().cwiseMax(o.min_corner());
    const Vec2 mx = max_corner().cwiseMin(o.max_corner());
    const Vec2 d = (mx - mn).cwiseMax(0.0);
    const double inter = d.x() * d.y();
    const double uni = area() + o.area() - inter;
    return uni > 0 ? inter / uni : 0.0;
  }
};

/// Detected wall-ground line segment in the image.
struct GroundEdge2D {
  Vec2 p0 = Vec2::Zero();
  Vec2 p1 = Vec2::Zero();

  double length() const { return (p1 - p0).norm(); }
};

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_CAMERA_HPP_
