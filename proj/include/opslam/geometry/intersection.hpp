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
#ifndef OPSLAM_GEOMETRY_INTERSECTION_HPP_
#define OPSLAM_GEOMETRY_INTERSECTION_HPP_

#include <algorithm>

#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"
#include "opslam/geometry/polygon.hpp"
#include "opslam/geometry/polyhedron.hpp"

namespace opslam {

/// 3D IoU of two upright cuboids: top-view rectangle intersection area
/// times vertical overlap, over the union volume.
inline double cuboid_iou_3d(const Cuboid& a, const Cuboid& b) {
  if (!a.is_upright() || !b.is_upright()) {
    throw NotUpright("cuboid_iou_3d requires yaw-only rotations");
  }
  const auto fa = a.footprint();
  const auto fb = b.footprint();
  const Polygon2 pa(fa.begin(), fa.end());
  const Polygon2 pb(fb.begin(), fb.end());
  const double area = polygon_area(convex_intersect(pa, pb));
  double az0, az1, bz0, bz1;
  a.height_range(&az0, &az1);
  b.height_range(&bz0, &bz1);
  const double hz = std::max(0.0, std::min(az1, bz1) - std::max(az0, bz0));
  const double inter = area * hz;
  const double uni = a.volume() + b.volume() - inter;
  if (uni <= 0) return 0.0;
  return std::min(1.0, std::max(0.0, inter / uni));
}

/// Fraction of the cuboid volume on the negative side of the plane. The
/// caller orients the plane so the camera lies on its positive side; the
/// negative side is then the hidden one.
inline double occluded_volume_ratio(const Cuboid& c, const Plane& p) {
  const Vec3 n = p.normal();
  const double scale = n.norm();
  const Polyhedron clipped =
      clip_polyhedron(cuboid_to_polyhedron(c), n / scale, p.offset() / scale);
  const double total = c.volume();
  if (total <= 0) return 0.0;
  return std::min(1.0, std::max(0.0, polyhedron_volume(clipped) / total));
}

/// Returns p with its sign flipped if needed so that `viewpoint` evaluates
/// positive; planes through the viewpoint are returned unchanged.
inline Plane oriented_toward(const Plane& p, const Vec3& viewpoint) {
  if (p.evaluate(viewpoint) >= 0) return p;
  Plane q;
  q.coeffs = -p.coeffs;
  return q;
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_INTERSECTION_HPP_
