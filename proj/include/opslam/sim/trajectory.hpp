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
#ifndef OPSLAM_SIM_TRAJECTORY_HPP_
#define OPSLAM_SIM_TRAJECTORY_HPP_

#include <cmath>
#include <vector>

#include "opslam/geometry/pose.hpp"
#include "opslam/geometry/so3.hpp"
#include "opslam/sim/scene.hpp"

namespace opslam {

/// Camera path spec. Orbit circles the room center looking outward at the
/// walls; walk follows the corridor centerline. The camera pitches down by
/// pitch_deg so the wall-floor junction stays in view.
struct TrajectorySpec {
  enum class Pattern { Orbit, Walk };

  Pattern pattern = Pattern::Orbit;
  int frames = 100;
  double rate_hz = 10.0;
  double camera_height = 1.2;
  double pitch_deg = 18.0;
  // Orbit parameters.
  double radius = 1.2;
  double angular_speed_deg = 3.6;  // per frame
  // Walk parameters.
  double speed = 0.05;  // meters per frame
  double sway = 0.03;   // lateral sinusoidal sway amplitude (baseline)
};

/// Camera-to-world pose with +z looking along the (unit, horizontal)
/// `forward`, pitched down by `pitch` radians, +x right, +y down.
inline Pose look_pose(const Vec3& position, const Vec3& forward,
                      double pitch) {
  const Vec3 f = forward.normalized();
  const Vec3 right = f.cross(Vec3::UnitZ()).normalized();
  const Vec3 fp = std::cos(pitch) * f - std::sin(pitch) * Vec3::UnitZ();
  Mat3 rot;
  rot.col(0) = right;
  rot.col(1) = fp.cross(right);
  rot.col(2) = fp;
  return Pose(orthonormalize(rot), position);
}

inline std::vector<double> trajectory_timestamps(const TrajectorySpec& t) {
  std::vector<double> stamps(t.frames);
  for (int k = 0; k < t.frames; ++k) stamps[k] = double(k) / t.rate_hz;
  return stamps;
}

namespace detail {

inline std::vector<Pose> orbit_trajectory(const Scene& scene,
                                          const TrajectorySpec& t) {
  Vec2 center = Vec2::Zero();
  for (const Vec2& v : scene.footprint) center += v;
  center /= double(scene.footprint.size());
  const double pitch = deg2rad(t.pitch_deg);
  std::vector<Pose> poses;
  poses.reserve(t.frames);
  for (int k = 0; k < t.frames; ++k) {
    const double a = deg2rad(t.angular_speed_deg) * k;
    const Vec3 forward(std::cos(a), std::sin(a), 0.0);
    const Vec3 pos(center.x() + t.radius * std::cos(a),
                   center.y() + t.radius * std::sin(a), t.camera_height);
    poses.push_back(look_pose(pos, forward, pitch));
  }
  return poses;
}

inline std::vector<Pose> walk_trajectory(const Scene& scene,
                                         const TrajectorySpec& t) {
  const SceneSpec& spec = scene.spec;
  // Centerline polyline: down the main leg, then (for an L-bend) along the
  // bend leg, stopping short of the end walls.
  std::vector<Vec2> path;
  path.push_back(Vec2(0.0, 0.8));
  if (spec.layout == SceneSpec::Layout::Corridor && spec.bend > 0) {
    const double yc = spec.length - spec.width / 2;
    path.push_back(Vec2(0.0, yc));
    path.push_back(Vec2(spec.width / 2 + spec.bend - 0.8, yc));
  } else {
    path.push_back(Vec2(0.0, spec.length - 0.8));
  }
  std::vector<double> cumlen = {0.0};
  for (int i = 1; i < int(path.size()); ++i) {
    cumlen.push_back(cumlen[i - 1] + (path[i] - path[i - 1]).norm());
  }
  const double pitch = deg2rad(t.pitch_deg);
  std::vector<Pose> poses;
  poses.reserve(t.frames);
  for (int k = 0; k < t.frames; ++k) {
    const double s = std::min(t.speed * k, cumlen.back() - 1e-6);
    int seg = 0;
    while (seg + 2 < int(path.size()) && s > cumlen[seg + 1]) ++seg;
    const Vec2 d = (path[seg + 1] - path[seg]).normalized();
    Vec2 p2 = path[seg] + (s - cumlen[seg]) * d;
    // Blend heading across the corner over the last meter of each segment.
    Vec2 dir = d;
    if (seg + 2 < int(path.size())) {
      const double to_corner = cumlen[seg + 1] - s;
      if (to_corner < 1.0) {
        const Vec2 dn = (path[seg + 2] - path[seg + 1]).normalized();
        dir = ((1.0 - to_corner) * dn + to_corner * d).normalized();
      }
    }
    const Vec2 lateral(-dir.y(), dir.x());
    p2 += t.sway * std::sin(0.35 * k) * lateral;
    poses.push_back(look_pose(Vec3(p2.x(), p2.y(), t.camera_height),
                              Vec3(dir.x(), dir.y(), 0.0), pitch));
  }
  return poses;
}

}  // namespace detail

inline std::vector<Pose> generate_trajectory(const Scene& scene,
                                             const TrajectorySpec& t) {
  return t.pattern == TrajectorySpec::Pattern::Orbit
             ? detail::orbit_trajectory(scene, t)
             : detail::walk_trajectory(scene, t);
}

}  // namespace opslam

#endif  // OPSLAM_SIM_TRAJECTORY_HPP_
