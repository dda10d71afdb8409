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
#ifndef OPSLAM_SIM_RENDER_HPP_
#define OPSLAM_SIM_RENDER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "opslam/core/rng.hpp"
#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/raycast.hpp"
#include "opslam/geometry/so3.hpp"
#include "opslam/sim/noise.hpp"
#include "opslam/sim/scene.hpp"
#include "opslam/slam/frame.hpp"

namespace opslam {

/// Full synthetic sequence: header plus per-frame measurements.
struct RenderedSequence {
  SequenceHeader header;
  std::vector<FrameInput> frames;
};

namespace detail {

inline constexpr uint64_t kStreamFramePoints = 1;
inline constexpr uint64_t kStreamFrameDetections = 2;
inline constexpr uint64_t kStreamFrameEdges = 3;
inline constexpr uint64_t kStreamFrameProposals = 4;
inline constexpr uint64_t kStreamFrameOdometry = 5;

/// True if the open segment from a to b crosses the wall quad.
inline bool segment_hits_wall(const Wall& w, const Vec3& a, const Vec3& b) {
  const Plane pl = w.plane();
  const double fa = pl.evaluate(a);
  const double fb = pl.evaluate(b);
  const double denom = fb - fa;
  if (std::abs(denom) < 1e-12) return false;
  const double t = -fa / denom;
  if (t <= 1e-6 || t >= 1.0 - 1e-6) return false;
  const Vec3 hit = a + t * (b - a);
  const Vec3 along = w.base1 - w.base0;
  const double len = along.norm();
  const double u = (hit - w.base0).dot(along) / len;
  return u >= 0.0 && u <= len && hit.z() >= 0.0 && hit.z() <= w.height;
}

/// True if the open segment from a to b passes through the box interior.
inline bool segment_hits_cuboid(const Cuboid& c, const Vec3& a, const Vec3& b) {
  const Vec3 o = c.pose.apply_inverse(a);
  const Vec3 d = c.pose.rotation.transpose() * (b - a);
  double t0, t1;
  if (!ray_box_range(o, d, 0.5 * c.dims, &t0, &t1)) return false;
  return std::max(t0, 1e-6) < std::min(t1, 1.0 - 1e-6);
}

/// Projects a surface point and tests depth, image bounds and occlusion.
/// `surface` is the owning wall index, or negative for object points.
inline bool point_visible(const Scene& scene, const CameraIntrinsics& intr,
                          const Pose& cam, const Vec3& p, int surface,
                          Vec2* pixel) {
  const Vec3 pc = cam.apply_inverse(p);
  if (pc.z() < kMinStructureDepth || pc.z() > kMaxStructureDepth) return false;
  const Vec2 px = intr.project(pc);
  if (!intr.in_image(px, 1.0)) return false;
  const Vec3& origin = cam.translation;
  for (int i = 0; i < int(scene.walls.size()); ++i) {
    if (i == surface) continue;
    if (segment_hits_wall(scene.walls[i], origin, p)) return false;
  }
  for (const Cuboid& c : scene.objects) {
    if (segment_hits_cuboid(c, origin, p)) return false;
  }
  *pixel = px;
  return true;
}

/// True if the ray toward the center of object k reaches it before any wall
/// or any other object.
inline bool object_center_visible(const Scene& scene, const Pose& cam, int k) {
  const Vec3& target = scene.objects[k].pose.translation;
  const Vec3& origin = cam.translation;
  for (const Wall& w : scene.walls) {
    if (segment_hits_wall(w, origin, target)) return false;
  }
  for (int j = 0; j < int(scene.objects.size()); ++j) {
    if (j == k) continue;
    if (segment_hits_cuboid(scene.objects[j], origin, target)) return false;
  }
  return true;
}

/// Emits `count` cuboid hypotheses around the true object. The first one is
/// drawn from a tight band around the truth with probability near_gt_prob;
/// the rest use Gaussian perturbations. Fit error grows with the true pose
/// error so ranking quality is controlled by fit_alpha / fit_beta.
inline void append_cuboid_proposals(const Cuboid& obj, const Pose& cam,
                                    const ProposalNoiseSpec& pn, Rng& rng,
                                    int det_index, FrameInput* frame) {
  const int count = std::clamp(pn.proposals_per_instance, 1, 15);
  const Pose world_to_cam = cam.inverse();
  for (int j = 0; j < count; ++j) {
    Vec3 dt;
    double dyaw;
    Vec3 dd;
    if (j == 0 && rng.bernoulli(pn.near_gt_prob)) {
      const double st = std::min(pn.trans_sigma, 0.025);
      const double sy = std::min(deg2rad(pn.yaw_sigma_deg), deg2rad(1.5));
      const double sd = std::min(pn.dims_sigma, 0.02);
      dt = Vec3(rng.uniform(-st, st), rng.uniform(-st, st),
                rng.uniform(-st, st));
      dyaw = rng.uniform(-sy, sy);
      dd = Vec3(rng.uniform(-sd, sd), rng.uniform(-sd, sd),
                rng.uniform(-sd, sd));
    } else {
      dt = rng.gauss3(pn.trans_sigma);
      dyaw = rng.gauss(0.0, deg2rad(pn.yaw_sigma_deg));
      dd = rng.gauss3(pn.dims_sigma);
    }
    const Cuboid world(
        Pose(yaw_rotation(obj.yaw() + dyaw), obj.pose.translation + dt),
        (obj.dims + dd).cwiseMax(0.05));
    const double err = dt.norm() + 0.5 * std::abs(dyaw) + dd.norm();
    double fit = pn.fit_alpha * err;
    if (pn.fit_beta > 0) fit += pn.fit_beta * std::abs(rng.gauss());
    CuboidProposalObs prop;
    prop.cuboid_cam = Cuboid(world_to_cam * world.pose, world.dims);
    prop.detection = det_index;
    prop.fit_error = std::clamp(fit, 0.0, 1.0);
    frame->cuboid_proposals.push_back(prop);
  }
}

/// Hypotheses for a spurious detection: random upright boxes along the ray
/// through the box center, resting on the floor, with mediocre fit scores.
inline void append_outlier_proposals(const BBox2D& box,
                                     const CameraIntrinsics& intr,
                                     const Pose& cam,
                                     const ProposalNoiseSpec& pn, Rng& rng,
                                     int det_index, FrameInput* frame) {
  const int count = std::min(3, std::max(1, pn.proposals_per_instance));
  const Pose world_to_cam = cam.inverse();
  const Vec3 ray = (cam.rotation * intr.unproject(box.center)).normalized();
  for (int j = 0; j < count; ++j) {
    const double depth = rng.uniform(1.0, 6.0);
    const Vec3 dims(rng.uniform(0.3, 1.0), rng.uniform(0.3, 1.0),
                    rng.uniform(0.3, 1.0));
    Vec3 center = cam.translation + depth * ray;
    center.z() = 0.5 * dims.z();
    const Cuboid world(Pose(yaw_rotation(rng.uniform(-kPi, kPi)), center),
                       dims);
    CuboidProposalObs prop;
    prop.cuboid_cam = Cuboid(world_to_cam * world.pose, world.dims);
    prop.detection = det_index;
    prop.fit_error = rng.uniform(0.3, 0.9);
    frame->cuboid_proposals.push_back(prop);
  }
}

inline void render_detections(const Scene& scene, const CameraIntrinsics& intr,
                              const Pose& cam, const NoiseSpec& noise,
                              const ProposalNoiseSpec& pn, Rng& rng_det,
                              Rng& rng_prop, FrameInput* frame) {
  for (int k = 0; k < int(scene.objects.size()); ++k) {
    const Cuboid& obj = scene.objects[k];
    bool visible = true;
    BBox2D box;
    try {
      box = project_cuboid_bbox(intr, cam, obj);
    } catch (const BehindCamera&) {
      visible = false;
    }
    if (visible) {
      const Vec2 mn = box.min_corner(), mx = box.max_corner();
      visible = mn.x() >= 2.0 && mn.y() >= 2.0 &&
                mx.x() <= intr.width - 2.0 && mx.y() <= intr.height - 2.0;
    }
    if (visible) visible = object_center_visible(scene, cam, k);
    if (visible && noise.detection_dropout_prob > 0 &&
        rng_det.bernoulli(noise.detection_dropout_prob)) {
      visible = false;
    }
    if (visible) {
      ObjectDetection det;
      det.instance = k;
      det.box = box;
      det.box.center += rng_det.gauss2(noise.bbox_sigma);
      det.box.size = (det.box.size + rng_det.gauss2(noise.bbox_sigma))
                         .cwiseMax(2.0);
      det.confidence =
          std::clamp(det.box.iou(box) + rng_det.gauss(0.0, 0.05), 0.0, 1.0);
      const int det_index = int(frame->detections.size());
      frame->detections.push_back(det);
      append_cuboid_proposals(obj, cam, pn, rng_prop, det_index, frame);
    }
    if (noise.outlier_detection_prob > 0 &&
        rng_det.bernoulli(noise.outlier_detection_prob)) {
      ObjectDetection det;
      det.instance = -1;
      det.box.center = Vec2(rng_det.uniform(60.0, intr.width - 60.0),
                            rng_det.uniform(60.0, intr.height - 60.0));
      det.box.size =
          Vec2(rng_det.uniform(30.0, 120.0), rng_det.uniform(30.0, 120.0));
      det.confidence = rng_det.uniform(0.3, 0.9);
      const int det_index = int(frame->detections.size());
      frame->detections.push_back(det);
      append_outlier_proposals(det.box, intr, cam, pn, rng_prop, det_index,
                               frame);
    }
  }
}

/// Samples the wall-floor junction of each wall, keeps maximal visible runs
/// at least 50 px long, and emits one plane proposal per run. Occlusion by
/// objects is intentionally ignored so edges act as extended layout lines;
/// only other walls truncate them.
inline void render_wall_edges(const Scene& scene, const CameraIntrinsics& intr,
                              const Pose& cam, const NoiseSpec& noise,
                              Rng& rng, FrameInput* frame) {
  const double znear = 0.15;
  const Vec2 img_max(intr.width - 1.0, intr.height - 1.0);
  for (int wi = 0; wi < int(scene.walls.size()); ++wi) {
    const Wall& w = scene.walls[wi];
    const double za = cam.apply_inverse(w.base0).z();
    const double zb = cam.apply_inverse(w.base1).z();
    if (za < znear && zb < znear) continue;
    double u0 = 0.0, u1 = 1.0;
    if (za < znear) u0 = (znear - za) / (zb - za);
    if (zb < znear) u1 = (znear - za) / (zb - za);
    if (u1 - u0 < 1e-9) continue;
    const auto base_point = [&](double u) -> Vec3 {
      return w.base0 + u * (w.base1 - w.base0);
    };
    const auto project_u = [&](double u) -> Vec2 {
      return intr.project(cam.apply_inverse(base_point(u)));
    };
    const double len_px = (project_u(u1) - project_u(u0)).norm();
    const int samples = std::clamp(int(std::lround(len_px / 10.0)), 8, 400);
    std::vector<char> flag(samples, 0);
    std::vector<double> us(samples);
    for (int i = 0; i < samples; ++i) {
      const double u = u0 + (u1 - u0) * double(i) / double(samples - 1);
      us[i] = u;
      const Vec3 p = base_point(u);
      const Vec2 px = project_u(u);
      if (!intr.in_image(px, 2.0)) continue;
      bool blocked = false;
      for (int j = 0; j < int(scene.walls.size()) && !blocked; ++j) {
        if (j != wi && segment_hits_wall(scene.walls[j], cam.translation, p)) {
          blocked = true;
        }
      }
      flag[i] = blocked ? 0 : 1;
    }
    int run_start = -1;
    for (int i = 0; i <= samples; ++i) {
      if (i < samples && flag[i]) {
        if (run_start < 0) run_start = i;
        continue;
      }
      if (run_start >= 0 && i - run_start >= 2) {
        const Vec2 p0 = project_u(us[run_start]);
        const Vec2 p1 = project_u(us[i - 1]);
        if ((p1 - p0).norm() >= 50.0) {
          GroundEdge2D edge;
          edge.p0 = (p0 + rng.gauss2(noise.edge_endpoint_sigma))
                        .cwiseMax(Vec2::Zero())
                        .cwiseMin(img_max);
          edge.p1 = (p1 + rng.gauss2(noise.edge_endpoint_sigma))
                        .cwiseMax(Vec2::Zero())
                        .cwiseMin(img_max);
          frame->edges.push_back(edge);
          double jitter = 0.0;
          for (int s = 0; s < 10; ++s) {
            jitter += std::abs(rng.gauss(0.0, noise.contour_jitter_sigma));
          }
          PlaneProposalObs prop;
          prop.edge = edge;
          prop.contour_dist = std::clamp(jitter / 10.0 / 100.0, 0.0, 1.0);
          frame->plane_proposals.push_back(prop);
          if (noise.spurious_edge_prob > 0 &&
              rng.bernoulli(noise.spurious_edge_prob)) {
            const double off =
                rng.uniform(20.0, 80.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
            const double rot = rng.gauss(0.0, deg2rad(3.0));
            const Vec2 dir = (edge.p1 - edge.p0).normalized();
            const Vec2 perp(-dir.y(), dir.x());
            const Eigen::Rotation2D<double> spin(rot);
            PlaneProposalObs bogus;
            bogus.edge.p0 =
                (edge.p0 + off * perp).cwiseMax(Vec2::Zero()).cwiseMin(
                    img_max);
            bogus.edge.p1 = (edge.p0 + off * perp +
                             spin * (edge.p1 - edge.p0))
                                .cwiseMax(Vec2::Zero())
                                .cwiseMin(img_max);
            bogus.contour_dist = rng.uniform(0.3, 0.8);
            frame->plane_proposals.push_back(bogus);
          }
        }
      }
      run_start = -1;
    }
  }
}

/// Relative pose measurement from the previous to the current frame,
/// corrupted by a constant forward translation bias, a pitch-rate bias and
/// isotropic Gaussian noise, all expressed in the previous camera frame.
inline Pose drifted_odometry(const Pose& prev, const Pose& cur,
                             const NoiseSpec& noise, Rng& rng) {
  Pose rel = prev.relative_to(cur);
  rel.translation += noise.odom_trans_bias * Vec3::UnitZ();
  if (noise.odom_trans_sigma > 0) {
    rel.translation += rng.gauss3(noise.odom_trans_sigma);
  }
  Vec3 w(0.0, deg2rad(noise.odom_rot_bias_deg), 0.0);
  if (noise.odom_rot_sigma_deg > 0) {
    w += rng.gauss3(deg2rad(noise.odom_rot_sigma_deg));
  }
  if (w.squaredNorm() > 0) {
    rel.rotation = orthonormalize(rel.rotation * so3_exp(w));
  }
  return rel;
}

}  // namespace detail

/// Renders every frame of a camera path through a scene. Deterministic for a
/// fixed (scene, poses, noise, seed); each frame draws from its own RNG
/// substreams so per-frame output is independent of other frames.
inline RenderedSequence render_observations(const Scene& scene,
                                            const std::vector<Pose>& poses,
                                            const std::vector<double>& stamps,
                                            const CameraIntrinsics& intr,
                                            const NoiseSpec& noise,
                                            const ProposalNoiseSpec& pnoise,
                                            uint64_t seed) {
  RenderedSequence seq;
  seq.header.intrinsics = intr;
  seq.header.world_ground = scene.ground;
  if (!poses.empty()) seq.header.initial_pose = poses[0];
  seq.frames.resize(poses.size());
  for (int f = 0; f < int(poses.size()); ++f) {
    FrameInput& frame = seq.frames[f];
    frame.frame_id = f;
    frame.timestamp = f < int(stamps.size()) ? stamps[f] : double(f);
    frame.gt_pose = poses[f];
    Rng rng_pts = Rng::stream(seed, detail::kStreamFramePoints, uint64_t(f));
    Rng rng_det =
        Rng::stream(seed, detail::kStreamFrameDetections, uint64_t(f));
    Rng rng_edge = Rng::stream(seed, detail::kStreamFrameEdges, uint64_t(f));
    Rng rng_prop =
        Rng::stream(seed, detail::kStreamFrameProposals, uint64_t(f));
    Rng rng_odom =
        Rng::stream(seed, detail::kStreamFrameOdometry, uint64_t(f));
    for (int i = 0; i < int(scene.points.size()); ++i) {
      Vec2 px;
      if (!detail::point_visible(scene, intr, poses[f], scene.points[i],
                                 scene.point_surface[i], &px)) {
        continue;
      }
      if (noise.pixel_sigma > 0) {
        px += rng_pts.gauss2(noise.pixel_sigma);
        if (!intr.in_image(px, 0.0)) continue;
      }
      PointObservation obs;
      obs.pixel = px;
      obs.track_id = i;
      if (noise.track_id_corruption_prob > 0 &&
          rng_pts.bernoulli(noise.track_id_corruption_prob)) {
        obs.track_id = rng_pts.uniform_int(0, int(scene.points.size()) - 1);
        obs.corrupted = obs.track_id != i;
      }
      frame.points.push_back(obs);
    }
    detail::render_detections(scene, intr, poses[f], noise, pnoise, rng_det,
                              rng_prop, &frame);
    detail::render_wall_edges(scene, intr, poses[f], noise, rng_edge, &frame);
    frame.odom = f == 0 ? Pose()
                        : detail::drifted_odometry(poses[f - 1], poses[f],
                                                   noise, rng_odom);
  }
  return seq;
}

}  // namespace opslam

#endif  // OPSLAM_SIM_RENDER_HPP_
