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
#ifndef OPSLAM_GEOMETRY_ANGLE_INTERVAL_HPP_
#define OPSLAM_GEOMETRY_ANGLE_INTERVAL_HPP_

#include <algorithm>
#include <cmath>
#include <utility>

#include "opslam/core/types.hpp"

namespace opslam {

/// Arc of azimuth angles on the unit circle: [start, start + extent),
/// start in [-pi, pi), extent in [0, 2pi).
struct AngleInterval {
  double start = 0.0;
  double extent = 0.0;

  AngleInterval() = default;
  AngleInterval(double s, double e) : start(wrap_angle(s)), extent(e) {}

  double end() const { return wrap_angle(start + extent); }

  bool contains(double angle) const {
    double d = angle - start;
    d -= 2.0 * kPi * std::floor(d / (2.0 * kPi));
    return d < extent;
  }
};

namespace detail {

/// Overlap measure of [0, ea) with the two unwrapped copies of the second
/// arc starting at offset d in [0, 2pi).
inline double arc_overlap_from_zero(double ea, double d, double eb) {
  double total = 0.0;
  for (double lo : {d, d - 2.0 * kPi}) {
    total += std::max(0.0, std::min(ea, lo + eb) - std::max(0.0, lo));
  }
  return total;
}

}  // namespace detail

/// Measure of a∩b in radians, wraparound-aware.
inline double angle_overlap_extent(const AngleInterval& a,
                                   const AngleInterval& b) {
  double d = b.start - a.start;
  d -= 2.0 * kPi * std::floor(d / (2.0 * kPi));
  return detail::arc_overlap_from_zero(a.extent, d, b.extent);
}

/// |a∩b| / |a∪b|; 0 for disjoint arcs, and 0 when both arcs are empty.
inline double angle_overlap_ratio(const AngleInterval& a,
                                  const AngleInterval& b) {
  const double inter = angle_overlap_extent(a, b);
  const double uni = a.extent + b.extent - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

/// Azimuth interval (top view) subtended at cam_center by a 3D segment.
/// A segment always subtends less than pi, so the shorter arc between the
/// endpoint azimuths is taken.
inline AngleInterval angle_interval(const Vec3& p0, const Vec3& p1,
                                    const Vec3& cam_center) {
  const Vec2 d0 = (p0 - cam_center).head<2>();
  const Vec2 d1 = (p1 - cam_center).head<2>();
  if ((p0 - p1).norm() < 1e-12 || d0.norm() < 1e-12 || d1.norm() < 1e-12) {
    throw DegenerateEdge("angle_interval: degenerate segment");
  }
  const double a0 = std::atan2(d0.y(), d0.x());
  const double a1 = std::atan2(d1.y(), d1.x());
  double diff = wrap_angle(a1 - a0);
  if (diff >= 0) return AngleInterval(a0, diff);
  return AngleInterval(a1, -diff);
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_ANGLE_INTERVAL_HPP_
