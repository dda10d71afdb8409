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
#ifndef OPSLAM_GEOMETRY_POLYGON_HPP_
#define OPSLAM_GEOMETRY_POLYGON_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "opslam/core/types.hpp"

namespace opslam {

using Polygon2 = std::vector<Vec2>;

/// Shoelace area; positive for counterclockwise vertex order.
inline double polygon_area(const Polygon2& poly) {
  const int n = int(poly.size());
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(twice);
}

/// Clips a convex polygon against the half-plane n.x <= c
/// (Sutherland-Hodgman, one edge).
inline Polygon2 clip_halfplane(const Polygon2& poly, const Vec2& n, double c) {
  Polygon2 out;
  const int sz = int(poly.size());
  if (sz == 0) return out;
  out.reserve(size_t(sz) + 1);
  for (int i = 0; i < sz; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % sz];
    const double da = n.dot(a) - c;
    const double db = n.dot(b) - c;
    if (da <= 0) out.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      out.push_back(a + (da / (da - db)) * (b - a));
    }
  }
  return out;
}

/// Intersection of two convex polygons (counterclockwise order assumed);
/// the subject is clipped against each edge of the clip polygon.
inline Polygon2 convex_intersect(const Polygon2& subject,
                                 const Polygon2& clip) {
  Polygon2 out = subject;
  const int n = int(clip.size());
  for (int i = 0; i < n && !out.empty(); ++i) {
    const Vec2& a = clip[i];
    const Vec2& b = clip[(i + 1) % n];
    const Vec2 edge = b - a;
    // Inward side of a CCW edge is its left; keep n.x <= n.a with
    // n = outward normal (edge rotated -90 degrees).
    const Vec2 outward(edge.y(), -edge.x());
    out = clip_halfplane(out, outward, outward.dot(a));
  }
  return out;
}

/// Crossing-number point-in-polygon test; works for non-convex polygons.
inline bool point_in_polygon(const Polygon2& poly, const Vec2& p) {
  const int n = int(poly.size());
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

/// Distance from a point to the polygon boundary (closest edge).
inline double polygon_boundary_distance(const Polygon2& poly, const Vec2& p) {
  const int n = int(poly.size());
  double best = 1e30;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    const double u =
        len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (a + u * d - p).norm());
  }
  return best;
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_POLYGON_HPP_
