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
#ifndef OPSLAM_SIM_SCENE_HPP_
#define OPSLAM_SIM_SCENE_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "opslam/core/rng.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"
#include "opslam/geometry/polygon.hpp"

namespace opslam {

/// Declarative description of a synthetic structured scene. The floor is
/// z = 0; walls are vertical and axis-aligned (Manhattan world).
struct SceneSpec {
  enum class Layout { Room, Corridor };

  Layout layout = Layout::Room;
  double width = 6.0;
  double length = 8.0;
  double height = 2.5;
  /// Corridor only: length of an L-bend leg branching off the far end
  /// toward +x; 0 keeps the corridor straight.
  double bend = 0.0;

  struct ObjectSpec {
    Vec3 dims_min = Vec3(0.4, 0.4, 0.5);
    Vec3 dims_max = Vec3(0.9, 0.9, 1.1);
    int count = 3;
  };
  std::vector<ObjectSpec> objects;

  double point_density = 3.0;  // feature points per square meter of surface
  uint64_t seed = 0;
};

/// One vertical wall: its Manhattan plane (inward-facing normal) plus the
/// finite rectangle it occupies, spanned by the floor segment base0->base1
/// and the wall height.
struct Wall {
  ManhattanPlane mplane;
  Vec3 base0 = Vec3::Zero();
  Vec3 base1 = Vec3::Zero();
  double height = 2.5;

  Plane plane() const { return mplane.to_plane(); }
  double length() const { return (base1 - base0).norm(); }
};

/// Fully instantiated ground-truth scene.
struct Scene {
  SceneSpec spec;
  Polygon2 footprint;  // counterclockwise floor polygon
  std::vector<Wall> walls;
  std::vector<Cuboid> objects;
  std::vector<Vec3> points;
  /// Surface each point lies on: wall index i >= 0, or -(k + 1) for
  /// object k.
  std::vector<int> point_surface;
  Plane ground = Plane(Vec4(0, 0, 1, 0));
};

namespace detail {

constexpr uint64_t kStreamObjects = 101;
constexpr uint64_t kStreamPoints = 102;

inline Polygon2 layout_footprint(const SceneSpec& spec) {
  const double w = spec.width, l = spec.length;
  Polygon2 poly;
  if (spec.layout == SceneSpec::Layout::Room) {
    poly = {Vec2(-w / 2, -l / 2), Vec2(w / 2, -l / 2), Vec2(w / 2, l / 2),
            Vec2(-w / 2, l / 2)};
  } else if (spec.bend <= 0) {
    poly = {Vec2(-w / 2, 0), Vec2(w / 2, 0), Vec2(w / 2, l), Vec2(-w / 2, l)};
  } else {
    poly = {Vec2(-w / 2, 0),          Vec2(w / 2, 0),
            Vec2(w / 2, l - w),       Vec2(w / 2 + spec.bend, l - w),
            Vec2(w / 2 + spec.bend, l), Vec2(-w / 2, l)};
  }
  return poly;
}

inline Wall wall_from_edge(const Vec2& a, const Vec2& b, double height) {
  // Interior of a CCW polygon is to the left of each edge.
  const Vec2 dir = (b - a).normalized();
  const Vec3 inward(-dir.y(), dir.x(), 0.0);
  Wall wall;
  wall.base0 = Vec3(a.x(), a.y(), 0.0);
  wall.base1 = Vec3(b.x(), b.y(), 0.0);
  wall.height = height;
  wall.mplane.axis = std::abs(inward.x()) > 0.5 ? ManhattanPlane::Axis::X
                                                : ManhattanPlane::Axis::Y;
  wall.mplane.sign = inward[int(wall.mplane.axis)] >= 0 ? 1 : -1;
  wall.mplane.dist = -inward.dot(wall.base0);
  return wall;
}

inline Polygon2 footprint_polygon(const Cuboid& c) {
  const auto corners = c.footprint();
  return Polygon2(corners.begin(), corners.end());
}

inline bool footprint_clear(const Scene& scene, const Cuboid& c,
                            double margin) {
  const Polygon2 fp = footprint_polygon(c);
  const Vec2 center(c.pose.translation.x(), c.pose.translation.y());
  for (const Vec2& corner : fp) {
    if (!point_in_polygon(scene.footprint, corner)) return false;
    if (polygon_boundary_distance(scene.footprint, corner) < margin) {
      return false;
    }
  }
  if (!point_in_polygon(scene.footprint, center)) return false;
  for (const Cuboid& other : scene.objects) {
    const Polygon2 inter = convex_intersect(fp, footprint_polygon(other));
    if (polygon_area(inter) > 1e-9) return false;
  }
  return true;
}

inline Vec3 sample_object_surface(const Cuboid& c, Rng& rng) {
  const Vec3 h = 0.5 * c.dims;
  // Faces: +-x sides, +-y sides, top. Area-weighted face choice.
  const double ax = c.dims.y() * c.dims.z();
  const double ay = c.dims.x() * c.dims.z();
  const double at = c.dims.x() * c.dims.y();
  const double total = 2 * ax + 2 * ay + at;
  double pick = rng.uniform() * total;
  Vec3 local;
  const double u = rng.uniform(-1.0, 1.0);
  const double v = rng.uniform(-1.0, 1.0);
  if (pick < 2 * ax) {
    local = Vec3(pick < ax ? h.x() : -h.x(), u * h.y(), v * h.z());
  } else if (pick < 2 * ax + 2 * ay) {
    local = Vec3(u * h.x(), pick < 2 * ax + ay ? h.y() : -h.y(), v * h.z());
  } else {
    local = Vec3(u * h.x(), v * h.y(), h.z());
  }
  // Keep points on the floor-adjacent faces above the ground.
  local.z() = std::max(local.z(), -h.z() + 0.02);
  return c.pose.apply(local);
}

}  // namespace detail

/// Deterministically instantiates walls, objects, and surface feature
/// points from a scene spec. Throws if an object cannot be placed without
/// overlap within 1000 rejection-sampling attempts.
inline Scene generate_scene(const SceneSpec& spec) {
  Scene scene;
  scene.spec = spec;
  scene.footprint = detail::layout_footprint(spec);
  const int nv = int(scene.footprint.size());
  for (int i = 0; i < nv; ++i) {
    scene.walls.push_back(detail::wall_from_edge(
        scene.footprint[i], scene.footprint[(i + 1) % nv], spec.height));
  }

  Rng obj_rng = Rng::stream(spec.seed, detail::kStreamObjects);
  Vec2 lo(1e30, 1e30), hi(-1e30, -1e30);
  for (const Vec2& v : scene.footprint) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  for (const SceneSpec::ObjectSpec& os : spec.objects) {
    for (int k = 0; k < os.count; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
        Vec3 dims;
        for (int i = 0; i < 3; ++i) {
          dims[i] = obj_rng.uniform(os.dims_min[i], os.dims_max[i]);
        }
        const double yaw = obj_rng.uniform(-kPi, kPi);
        const Vec2 c(obj_rng.uniform(lo.x(), hi.x()),
                     obj_rng.uniform(lo.y(), hi.y()));
        Cuboid cuboid;
        cuboid.pose = Pose(yaw_rotation(yaw), Vec3(c.x(), c.y(), dims.z() / 2));
        cuboid.dims = dims;
        if (detail::footprint_clear(scene, cuboid, 0.15)) {
          scene.objects.push_back(cuboid);
          placed = true;
        }
      }
      if (!placed) {
        throw std::runtime_error(
            "generate_scene: object placement failed after 1000 attempts");
      }
    }
  }

  Rng pt_rng = Rng::stream(spec.seed, detail::kStreamPoints);
  for (int w = 0; w < int(scene.walls.size()); ++w) {
    const Wall& wall = scene.walls[w];
    const int n =
        std::max(1, int(std::lround(spec.point_density * wall.length() *
                                    wall.height)));
    for (int i = 0; i < n; ++i) {
      const double u = pt_rng.uniform();
      const double v = pt_rng.uniform(0.05, 0.95);
      scene.points.push_back(wall.base0 + u * (wall.base1 - wall.base0) +
                             Vec3(0, 0, v * wall.height));
      scene.point_surface.push_back(w);
    }
  }
  for (int k = 0; k < int(scene.objects.size()); ++k) {
    const Cuboid& c = scene.objects[k];
    const double area = 2 * c.dims.y() * c.dims.z() +
                        2 * c.dims.x() * c.dims.z() + c.dims.x() * c.dims.y();
    const int n = std::max(3, int(std::lround(spec.point_density * area)));
    for (int i = 0; i < n; ++i) {
      scene.points.push_back(detail::sample_object_surface(c, pt_rng));
      scene.point_surface.push_back(-(k + 1));
    }
  }
  return scene;
}

}  // namespace opslam

#endif  // OPSLAM_SIM_SCENE_HPP_
