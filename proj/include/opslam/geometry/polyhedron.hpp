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
#ifndef OPSLAM_GEOMETRY_POLYHEDRON_HPP_
#define OPSLAM_GEOMETRY_POLYHEDRON_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "opslam/geometry/cuboid.hpp"

namespace opslam {

/// Convex polyhedron as a face soup: each face is a planar polygon with
/// cyclically ordered vertices (either winding).
struct Polyhedron {
  std::vector<std::vector<Vec3>> faces;

  bool empty() const { return faces.empty(); }
};

inline Polyhedron cuboid_to_polyhedron(const Cuboid& c) {
  const auto v = c.corners();
  // Cyclic corner orders per face (bit0 x, bit1 y, bit2 z).
  static const int kFace[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4},
                                  {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};
  Polyhedron out;
  out.faces.reserve(6);
  for (const auto& f : kFace) {
    out.faces.push_back({v[f[0]], v[f[1]], v[f[2]], v[f[3]]});
  }
  return out;
}

/// Unsigned area of an ordered planar polygon in 3D: 0.5 |sum v_i x v_i+1|.
inline double face_area(const std::vector<Vec3>& face) {
  const int n = int(face.size());
  if (n < 3) return 0.0;
  Vec3 s = Vec3::Zero();
  for (int i = 0; i < n; ++i) s += face[i].cross(face[(i + 1) % n]);
  return 0.5 * s.norm();
}

/// Volume as a pyramid fan from an interior point: faces of a convex solid
/// partition it into pyramids of volume area * height / 3. Winding-free.
inline double polyhedron_volume(const Polyhedron& p) {
  Vec3 inner = Vec3::Zero();
  int count = 0;
  for (const auto& f : p.faces) {
    for (const auto& v : f) {
      inner += v;
      ++count;
    }
  }
  if (count == 0) return 0.0;
  inner /= double(count);
  double vol = 0.0;
  for (const auto& f : p.faces) {
    if (f.size() < 3) continue;
    const Vec3 n = (f[1] - f[0]).cross(f[2] - f[0]);
    const double nn = n.norm();
    if (nn < 1e-15) continue;
    const double h = std::abs((inner - f[0]).dot(n / nn));
    vol += face_area(f) * h / 3.0;
  }
  return vol;
}

/// Clips a convex polyhedron to the half-space n.x + d <= 0. Cut faces are
/// closed with a cap polygon assembled from the crossing points.
inline Polyhedron clip_polyhedron(const Polyhedron& p, const Vec3& n,
                                  double d) {
  Polyhedron out;
  std::vector<Vec3> cap;
  for (const auto& face : p.faces) {
    const int sz = int(face.size());
    std::vector<Vec3> kept;
    kept.reserve(size_t(sz) + 1);
    for (int i = 0; i < sz; ++i) {
      const Vec3& a = face[i];
      const Vec3& b = face[(i + 1) % sz];
      const double da = n.dot(a) + d;
      const double db = n.dot(b) + d;
      if (da <= 0) kept.push_back(a);
      if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
        const Vec3 x = a + (da / (da - db)) * (b - a);
        kept.push_back(x);
        cap.push_back(x);
      }
    }
    if (kept.size() >= 3) out.faces.push_back(std::move(kept));
  }
  // Deduplicate cap points and order them by angle in the cut plane.
  std::vector<Vec3> uniq;
  for (const auto& c : cap) {
    bool dup = false;
    for (const auto& u : uniq) {
      if ((c - u).norm() < 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) uniq.push_back(c);
  }
  if (uniq.size() >= 3) {
    Vec3 centroid = Vec3::Zero();
    for (const auto& u : uniq) centroid += u;
    centroid /= double(uniq.size());
    const Vec3 nu = n.normalized();
    Vec3 e1 = nu.unitOrthogonal();
    Vec3 e2 = nu.cross(e1);
    std::sort(uniq.begin(), uniq.end(), [&](const Vec3& a, const Vec3& b) {
      const Vec3 ra = a - centroid, rb = b - centroid;
      return std::atan2(ra.dot(e2), ra.dot(e1)) <
             std::atan2(rb.dot(e2), rb.dot(e1));
    });
    out.faces.push_back(std::move(uniq));
  }
  return out;
}

}  // namespace opslam

#endif  // OPSLAM_GEOMETRY_POLYHEDRON_HPP_
