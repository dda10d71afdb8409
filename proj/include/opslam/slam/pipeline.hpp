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
#ifndef OPSLAM_SLAM_PIPELINE_HPP_
#define OPSLAM_SLAM_PIPELINE_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "opslam/crf/inference.hpp"
#include "opslam/crf/model.hpp"
#include "opslam/estimation/solver.hpp"
#include "opslam/geometry/raycast.hpp"
#include "opslam/slam/association.hpp"
#include "opslam/slam/frame.hpp"
#include "opslam/slam/lifecycle.hpp"
#include "opslam/slam/lift.hpp"
#include "opslam/slam/map.hpp"
#include "opslam/slam/metrics.hpp"

namespace opslam {

/// Which landmark families participate in the back end.
enum class SlamMode { Points, PointsObjects, PointsObjectsPlanes, Full };

inline bool mode_has_objects(SlamMode m) { return m != SlamMode::Points; }
inline bool mode_has_planes(SlamMode m) {
  return m == SlamMode::PointsObjectsPlanes || m == SlamMode::Full;
}
inline bool mode_manhattan(SlamMode m) { return m == SlamMode::Full; }

inline const char* to_string(SlamMode m) {
  switch (m) {
    case SlamMode::Points: return "points";
    case SlamMode::PointsObjects: return "points+objects";
    case SlamMode::PointsObjectsPlanes: return "points+objects+planes";
    default: return "points+objects+planes+manhattan";
  }
}

struct PipelineConfig {
  SlamMode mode = SlamMode::Full;
  CrfWeights crf;
  LifecycleConfig lifecycle;

  SolverConfig motion_solver = [] {
    SolverConfig s;
    s.max_iters = 10;
    return s;
  }();
  SolverConfig window_solver = [] {
    SolverConfig s;
    s.max_iters = 8;
    return s;
  }();

  int window = 10;

  double reproj_weight = 1.0;
  double camera_plane_weight = 100.0;
  double camera_object_weight = 0.01;  ///< scaled by detection confidence
  double point_plane_weight = 25.0;
  double object_plane_weight = 10.0;
  double odom_trans_weight = 100.0;
  double odom_rot_weight = 400.0;

  double plane_support_dist = 0.1;
  double plane_assoc_angle_deg = 30.0;
  double plane_assoc_offset = 1.0;
  int object_min_shared = 3;
  double manhattan_gate_deg = 30.0;

  int min_matches = 8;
  double match_gate_px = 30.0;
  double min_triangulation_angle_deg = 1.0;
  double max_triangulation_reproj_px = 3.0;
  int pending_max_age = 30;
  double depth_init_fraction = 0.30;
  int depth_init_cap = 100;
  double wall_height = 2.5;

  int max_old_box_obs = 30;    ///< per-object out-of-window factor budget
  int max_old_edge_obs = 40;   ///< per-plane out-of-window factor budget
  int max_point_plane = 50;    ///< per-plane point-plane factor budget
  int point_anchor_obs = 3;    ///< earliest observations kept as scale anchor
};

struct FrameDiagnostics {
  int frame_id = -1;
  int total_points = 0;
  int matched_points = 0;
  int triangulated_points = 0;
  int structure_points = 0;
  int detections = 0;
  int selected_objects = 0;
  int selected_planes = 0;
  int promoted = 0;
  int culled = 0;
  double crf_energy = 0.0;
  double motion_cost = 0.0;
  double ba_cost = 0.0;
  int ba_iterations = 0;
  double tracking_ms = 0.0;  // association + motion-only + triangulation
  double crf_ms = 0.0;
  double ba_ms = 0.0;
};

/// Sequential single-camera pipeline. Frame 0 adopts the header pose as the
/// gauge (ground-truth height fixes scale); later frames run association,
/// motion-only refinement, single-image proposal selection, map maintenance
/// and a sliding-window bundle adjustment.
class Pipeline {
 public:
  Pipeline(const SequenceHeader& header, const PipelineConfig& cfg)
      : cfg_(cfg) {
    map_.intrinsics = header.intrinsics;
    map_.ground = header.world_ground;
    initial_pose_ = header.initial_pose;
  }

  const SlamMap& map() const { return map_; }
  SlamMap& map() { return map_; }
  const PipelineConfig& config() const { return cfg_; }
  const std::vector<FrameDiagnostics>& diagnostics() const { return diags_; }

  std::vector<TimedPose> trajectory() const {
    std::vector<TimedPose> out;
    out.reserve(map_.frames.size());
    for (const FrameState& f : map_.frames) {
      out.push_back({f.timestamp, f.pose});
    }
    return out;
  }

  /// Stable object cuboids in the current map.
  std::vector<Cuboid> stable_objects() const {
    std::vector<Cuboid> out;
    for (const MapLandmark& lm : map_.landmarks) {
      if (lm.type == LandmarkType::Object &&
          lm.state == LandmarkState::Stable) {
        out.push_back(lm.cuboid);
      }
    }
    return out;
  }

  FrameDiagnostics process_frame(const FrameInput& frame) {
    FrameDiagnostics d;
    d.frame_id = frame.frame_id;
    d.total_points = int(frame.points.size());
    d.detections = int(frame.detections.size());

    const int fidx = int(map_.frames.size());
    FrameState state;
    state.frame_id = frame.frame_id;
    state.timestamp = frame.timestamp;
    state.gt_pose = frame.gt_pose;
    state.odom = frame.odom;
    state.pose = fidx == 0 ? initial_pose_
                           : map_.frames.back().pose * frame.odom;
    map_.frames.push_back(state);

    // 1. Point association against registered tracks.
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SeenPoint> seen;
    associate_points(frame, fidx, &seen, &d);

    // 2. Motion-only pose refinement.
    if (fidx > 0) motion_only(frame, fidx, seen, &d);
    record_point_observations(fidx, seen);

    // 3. Two-view initialization of pending tracks.
    d.triangulated_points = triangulate_pending(fidx, &seen);
    const auto t1 = std::chrono::steady_clock::now();
    d.tracking_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    // 4. Single-image proposal selection.
    std::vector<LiftedPlane> planes;
    std::vector<CuboidProposal> cuboids;
    std::vector<int> selected_planes, selected_cuboids;
    if (mode_has_objects(cfg_.mode) || mode_has_planes(cfg_.mode)) {
      run_crf(frame, fidx, &planes, &cuboids, &selected_planes,
              &selected_cuboids, &d);
    }
    const auto t2 = std::chrono::steady_clock::now();
    d.crf_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();

    // 5. Object and plane association / spawning.
    if (mode_has_objects(cfg_.mode)) {
      update_objects(frame, fidx, seen, cuboids, selected_cuboids, &d);
    }
    if (mode_has_planes(cfg_.mode)) {
      update_planes(fidx, seen, planes, selected_planes, &d);
    }

    // 6. Promotion and culling.
    const LifecycleActions acts = lifecycle_update(&map_, fidx,
                                                   cfg_.lifecycle);
    d.promoted = acts.promoted;
    d.culled = acts.culled;

    // 7. Structure-assisted depth initialization and the lost gate.
    const double matched_fraction =
        frame.points.empty()
            ? 1.0
            : double(d.matched_points) / double(frame.points.size());
    if (matched_fraction < cfg_.depth_init_fraction) {
      d.structure_points = init_depth_from_structure(frame, fidx);
    }
    check_tracking(fidx, d);

    // 8. Sliding-window bundle adjustment.
    const auto t3 = std::chrono::steady_clock::now();
    if (fidx > 0) windowed_ba(fidx, &d);
    const auto t4 = std::chrono::steady_clock::now();
    d.ba_ms = std::chrono::duration<double, std::milli>(t4 - t3).count();

    prune_pending(fidx);
    diags_.push_back(d);
    return d;
  }

 private:
  struct SeenPoint {
    int landmark = -1;
    Vec2 pixel = Vec2::Zero();
  };

  struct PendingObs {
    int frame = -1;
    Vec2 pixel = Vec2::Zero();
  };

  struct PendingTrack {
    std::vector<PendingObs> obs;
    int last_seen = -1;
  };

  void associate_points(const FrameInput& frame, int fidx,
                        std::vector<SeenPoint>* seen, FrameDiagnostics* d) {
    const Pose& pose = map_.frames[fidx].pose;
    for (const PointObservation& obs : frame.points) {
      const auto it = map_.track_to_landmark.find(obs.track_id);
      if (it == map_.track_to_landmark.end()) {
        PendingTrack& t = pending_[obs.track_id];
        t.obs.push_back({fidx, obs.pixel});
        t.last_seen = fidx;
        continue;
      }
      const MapLandmark& lm = map_.landmarks[it->second];
      if (!lm.alive()) continue;
      const Vec3 pc = pose.apply_inverse(lm.point);
      if (pc.z() < kMinStructureDepth) continue;
      const Vec2 px = map_.intrinsics.project(pc);
      if ((px - obs.pixel).norm() > cfg_.match_gate_px) continue;
      seen->push_back({it->second, obs.pixel});
      ++d->matched_points;
    }
  }

  void motion_only(const FrameInput& frame, int fidx,
                   const std::vector<SeenPoint>& seen, FrameDiagnostics* d) {
    if (int(seen.size()) < 3) return;
    FactorGraph graph;
    graph.intrinsics = map_.intrinsics;
    graph.world_ground = map_.ground;
    const int prev = graph.add_vertex(
        Vertex::camera(map_.frames[fidx - 1].pose, true));
    const int cur = graph.add_vertex(
        Vertex::camera(map_.frames[fidx].pose, false));
    for (const SeenPoint& s : seen) {
      const int pv = graph.add_vertex(
          Vertex::point3(map_.landmarks[s.landmark].point, true));
      graph.add_factor(Factor::point_reproj(cur, pv, s.pixel,
                                            cfg_.reproj_weight));
    }
    graph.add_factor(Factor::odometry_prior(prev, cur, frame.odom,
                                            cfg_.odom_trans_weight,
                                            cfg_.odom_rot_weight));
    const OptimizeResult res = optimize(graph, cfg_.motion_solver);
    map_.frames[fidx].pose = graph.vertices[cur].pose;
    d->motion_cost = res.final_cost;
  }

  void record_point_observations(int fidx,
                                 const std::vector<SeenPoint>& seen) {
    for (const SeenPoint& s : seen) {
      MapLandmark& lm = map_.landmarks[s.landmark];
      lm.point_obs.push_back({fidx, s.pixel});
      lm.record_frame(fidx);
    }
  }

  /// Closest-point two-view triangulation between the first and the latest
  /// pending observation of each track seen this frame.
  int triangulate_pending(int fidx, std::vector<SeenPoint>* seen) {
    int created = 0;
    const CameraIntrinsics& intr = map_.intrinsics;
    std::vector<int> done;
    for (auto& [track, pend] : pending_) {
      if (pend.last_seen != fidx || pend.obs.size() < 2) continue;
      const PendingObs& a = pend.obs.front();
      const PendingObs& b = pend.obs.back();
      const Pose& pa = map_.frames[a.frame].pose;
      const Pose& pb = map_.frames[b.frame].pose;
      const Vec3 ra = (pa.rotation * intr.unproject(a.pixel)).normalized();
      const Vec3 rb = (pb.rotation * intr.unproject(b.pixel)).normalized();
      const double cos_angle = std::min(1.0, std::max(-1.0, ra.dot(rb)));
      if (std::acos(cos_angle) <
          deg2rad(cfg_.min_triangulation_angle_deg)) {
        continue;
      }
      // Closest point between the two rays.
      const Vec3 base = pb.translation - pa.translation;
      const double rr = ra.dot(rb);
      const double denom = 1.0 - rr * rr;
      if (denom < 1e-12) continue;
      const double s = (base.dot(ra) - base.dot(rb) * rr) / denom;
      const double t = (base.dot(ra) * rr - base.dot(rb)) / denom;
      const Vec3 point = 0.5 * (pa.translation + s * ra +
                                pb.translation + t * rb);
      if (!reprojects_everywhere(point, pend.obs)) continue;
      MapLandmark& lm = map_.add_landmark(LandmarkType::Point, fidx);
      lm.point = point;
      lm.track_id = track;
      for (const PendingObs& o : pend.obs) {
        lm.point_obs.push_back({o.frame, o.pixel});
        lm.record_frame(o.frame);
      }
      map_.track_to_landmark[track] = lm.id;
      seen->push_back({lm.id, b.pixel});
      done.push_back(track);
      ++created;
    }
    for (int track : done) pending_.erase(track);
    return created;
  }

  bool reprojects_everywhere(const Vec3& point,
                             const std::vector<PendingObs>& obs) const {
    for (const PendingObs& o : obs) {
      const Vec3 pc = map_.frames[o.frame].pose.apply_inverse(point);
      if (pc.z() < kMinStructureDepth || pc.z() > kMaxStructureDepth) {
        return false;
      }
      const Vec2 px = map_.intrinsics.project(pc);
      if ((px - o.pixel).norm() > cfg_.max_triangulation_reproj_px) {
        return false;
      }
    }
    return true;
  }

  void run_crf(const FrameInput& frame, int fidx,
               std::vector<LiftedPlane>* planes,
               std::vector<CuboidProposal>* cuboids,
               std::vector<int>* selected_planes,
               std::vector<int>* selected_cuboids, FrameDiagnostics* d) {
    const Pose& pose = map_.frames[fidx].pose;
    lift_frame_proposals(map_.intrinsics, map_.ground, pose, frame,
                         mode_has_planes(cfg_.mode),
                         mode_has_objects(cfg_.mode), planes, cuboids);
    if (planes->empty() && cuboids->empty()) return;

    std::vector<PlaneProposal> props;
    props.reserve(planes->size());
    for (const LiftedPlane& lp : *planes) props.push_back(lp.prop);
    const CrfModel model = build_crf(props, *cuboids, pose, cfg_.crf);
    const BpState bp = run_lbp(model);
    const std::vector<int> x = map_select(model, bp);
    d->crf_energy = energy_of(model, x);
    for (int i = 0; i < model.num_vars(); ++i) {
      if (!x[i]) continue;
      if (model.vars[i].kind == CrfModel::VarKind::Plane) {
        selected_planes->push_back(model.vars[i].proposal_index);
      } else {
        selected_cuboids->push_back(model.vars[i].proposal_index);
      }
    }
    d->selected_planes = int(selected_planes->size());
    d->selected_objects = int(selected_cuboids->size());
  }

  void update_objects(const FrameInput& frame, int fidx,
                      const std::vector<SeenPoint>& seen,
                      const std::vector<CuboidProposal>& cuboids,
                      const std::vector<int>& selected,
                      FrameDiagnostics* d) {
    (void)d;
    // One selected proposal per detection at most.
    std::vector<int> chosen;  // indices into `cuboids`
    std::vector<std::set<int>> det_points;
    for (int idx : selected) {
      const int det = cuboids[idx].instance_id;
      if (det < 0 || det >= int(frame.detections.size())) continue;
      std::set<int> pts;
      for (const SeenPoint& s : seen) {
        if (frame.detections[det].box.contains(s.pixel)) {
          pts.insert(s.landmark);
        }
      }
      chosen.push_back(idx);
      det_points.push_back(std::move(pts));
    }
    const std::vector<ObjectMatch> matches =
        associate_objects(map_, det_points, cfg_.object_min_shared);
    std::set<int> matched_rows;
    for (const ObjectMatch& m : matches) {
      matched_rows.insert(m.detection);
      MapLandmark& lm = map_.landmarks[m.landmark];
      const int det = cuboids[chosen[m.detection]].instance_id;
      lm.box_obs.push_back({fidx, frame.detections[det].box,
                            frame.detections[det].confidence});
      lm.record_frame(fidx);
      lm.supporting_points.insert(det_points[m.detection].begin(),
                                  det_points[m.detection].end());
    }
    for (int row = 0; row < int(chosen.size()); ++row) {
      if (matched_rows.count(row)) continue;
      const CuboidProposal& p = cuboids[chosen[row]];
      const int det = p.instance_id;
      MapLandmark& lm = map_.add_landmark(LandmarkType::Object, fidx);
      lm.cuboid = p.cuboid;
      lm.box_obs.push_back({fidx, frame.detections[det].box,
                            frame.detections[det].confidence});
      lm.record_frame(fidx);
      lm.supporting_points = det_points[row];
    }
  }

  void update_planes(int fidx, const std::vector<SeenPoint>& seen,
                     const std::vector<LiftedPlane>& planes,
                     const std::vector<int>& selected, FrameDiagnostics* d) {
    (void)d;
    std::set<int> taken;
    for (int idx : selected) {
      const LiftedPlane& lp = planes[idx];
      std::set<int> pts;
      for (const SeenPoint& s : seen) {
        const MapLandmark& plm = map_.landmarks[s.landmark];
        if (std::abs(lp.plane.signed_distance(plm.point)) <=
            cfg_.plane_support_dist) {
          pts.insert(s.landmark);
        }
      }
      const int match = associate_plane(map_, lp.plane, pts, taken,
                                        deg2rad(cfg_.plane_assoc_angle_deg),
                                        cfg_.plane_assoc_offset);
      if (match >= 0) {
        taken.insert(match);
        MapLandmark& lm = map_.landmarks[match];
        lm.edge_obs.push_back({fidx, lp.prop.edge});
        lm.record_frame(fidx);
        lm.supporting_points.insert(pts.begin(), pts.end());
        extend_plane_extent(&lm, lp.g0, lp.g1);
        continue;
      }
      const bool manhattan_ok =
          within_manhattan_gate(lp.plane, deg2rad(cfg_.manhattan_gate_deg));
      MapLandmark& lm = map_.add_landmark(mode_manhattan(cfg_.mode)
                                              ? LandmarkType::PlaneManhattan
                                              : LandmarkType::PlaneFree,
                                          fidx);
      lm.plane = lp.plane;
      bool snap_ok = false;
      lm.mplane = ManhattanPlane::from_plane(
          lp.plane, deg2rad(cfg_.manhattan_gate_deg), &snap_ok);
      lm.base0 = lp.g0;
      lm.base1 = lp.g1;
      lm.edge_obs.push_back({fidx, lp.prop.edge});
      lm.record_frame(fidx);
      lm.supporting_points = pts;
      if (!manhattan_ok) {
        lm.state = LandmarkState::Culled;
      } else {
        taken.insert(lm.id);
      }
    }
  }

  void extend_plane_extent(MapLandmark* lm, const Vec3& g0, const Vec3& g1) {
    Vec3 dir = Vec3::UnitZ().cross(lm->plane_estimate().normal());
    const double dn = dir.norm();
    if (dn < 1e-9) return;
    dir /= dn;
    const Vec3 anchor = lm->base0;
    double smin = 0.0;
    double smax = (lm->base1 - anchor).dot(dir);
    if (smin > smax) std::swap(smin, smax);
    for (const Vec3& g : {g0, g1}) {
      const double s = (g - anchor).dot(dir);
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    lm->base0 = anchor + smin * dir;
    lm->base1 = anchor + smax * dir;
    lm->base0.z() = 0.0;
    lm->base1.z() = 0.0;
  }

  int init_depth_from_structure(const FrameInput& frame, int fidx) {
    const Pose& pose = map_.frames[fidx].pose;
    const CameraIntrinsics& intr = map_.intrinsics;
    int created = 0;
    for (const PointObservation& obs : frame.points) {
      if (created >= cfg_.depth_init_cap) break;
      if (map_.track_to_landmark.count(obs.track_id)) continue;
      double depth = 0.0;
      if (!structure_depth_at(pose, obs.pixel, &depth)) continue;
      MapLandmark& lm = map_.add_landmark(LandmarkType::Point, fidx);
      lm.point = pose.apply(intr.unproject(obs.pixel) * depth);
      lm.track_id = obs.track_id;
      lm.from_structure = true;
      const auto pit = pending_.find(obs.track_id);
      if (pit != pending_.end()) {
        for (const PendingObs& o : pit->second.obs) {
          lm.point_obs.push_back({o.frame, o.pixel});
          lm.record_frame(o.frame);
        }
        pending_.erase(pit);
      } else {
        lm.point_obs.push_back({fidx, obs.pixel});
        lm.record_frame(fidx);
      }
      map_.track_to_landmark[obs.track_id] = lm.id;
      ++created;
    }
    return created;
  }

  /// Depth along the pixel ray to the nearest Stable structure the pixel
  /// lies on in the image: a plane's wall rectangle or an object's box.
  bool structure_depth_at(const Pose& pose, const Vec2& pixel,
                          double* depth) const {
    const CameraIntrinsics& intr = map_.intrinsics;
    double best = kMaxStructureDepth;
    bool found = false;
    for (const MapLandmark& lm : map_.landmarks) {
      if (lm.state != LandmarkState::Stable) continue;
      if (lm.type == LandmarkType::PlaneFree ||
          lm.type == LandmarkType::PlaneManhattan) {
        if (!pixel_on_wall(lm, pose, pixel)) continue;
        try {
          const double t =
              ray_structure_depth(intr, pose, pixel, lm.plane_estimate());
          if (t < best) {
            best = t;
            found = true;
          }
        } catch (const NoIntersection&) {
        }
      } else if (lm.type == LandmarkType::Object) {
        try {
          const BBox2D box = project_cuboid_bbox(intr, pose, lm.cuboid);
          if (!box.contains(pixel)) continue;
          const double t = ray_structure_depth(intr, pose, pixel, lm.cuboid);
          if (t < best) {
            best = t;
            found = true;
          }
        } catch (const BehindCamera&) {
        } catch (const NoIntersection&) {
        }
      }
    }
    *depth = best;
    return found;
  }

  bool pixel_on_wall(const MapLandmark& lm, const Pose& pose,
                     const Vec2& pixel) const {
    const Vec3 up(0, 0, cfg_.wall_height);
    const std::array<Vec3, 4> corners = {lm.base0, lm.base1, lm.base1 + up,
                                         lm.base0 + up};
    Polygon2 poly;
    poly.reserve(4);
    for (const Vec3& c : corners) {
      const Vec3 pc = pose.apply_inverse(c);
      if (pc.z() < kMinStructureDepth) return false;
      poly.push_back(map_.intrinsics.project(pc));
    }
    return point_in_polygon(poly, pixel);
  }

  void check_tracking(int fidx, const FrameDiagnostics& d) {
    if (fidx == 0) return;
    if (d.matched_points >= cfg_.min_matches) return;
    if (d.structure_points > 0) return;
    int alive_points = 0;
    for (const MapLandmark& lm : map_.landmarks) {
      // Points born this frame were never available as match targets.
      if (lm.type == LandmarkType::Point && lm.alive() &&
          lm.created_frame < fidx) {
        ++alive_points;
      }
    }
    // During bootstrap there is nothing to match against yet.
    if (alive_points < cfg_.min_matches) return;
    throw TrackingLost("frame " + std::to_string(fidx) + ": " +
                       std::to_string(d.matched_points) +
                       " point matches and no structure fallback");
  }

  void windowed_ba(int fidx, FrameDiagnostics* d) {
    const int wstart = std::max(0, fidx - cfg_.window + 1);
    FactorGraph graph;
    graph.intrinsics = map_.intrinsics;
    graph.world_ground = map_.ground;

    std::map<int, int> pose_vertex;
    const auto ensure_pose = [&](int frame, bool in_window) -> int {
      const auto it = pose_vertex.find(frame);
      if (it != pose_vertex.end()) return it->second;
      const bool fixed = !in_window || frame == 0;
      const int v = graph.add_vertex(
          Vertex::camera(map_.frames[frame].pose, fixed));
      pose_vertex[frame] = v;
      return v;
    };
    for (int f = wstart; f <= fidx; ++f) ensure_pose(f, true);

    // Odometry chain across the window plus the boundary link.
    for (int f = std::max(1, wstart); f <= fidx; ++f) {
      graph.add_factor(Factor::odometry_prior(
          ensure_pose(f - 1, f - 1 >= wstart), ensure_pose(f, true),
          map_.frames[f].odom, cfg_.odom_trans_weight,
          cfg_.odom_rot_weight));
    }

    // Points observed in the window, with a few earliest observations kept
    // as anchors to older (fixed) poses.
    std::map<int, int> point_vertex;
    for (MapLandmark& lm : map_.landmarks) {
      if (lm.type != LandmarkType::Point || !lm.alive()) continue;
      if (lm.last_observed() < wstart) continue;
      bool any = false;
      for (const PointObsRecord& o : lm.point_obs) {
        if (o.frame >= wstart) {
          any = true;
          break;
        }
      }
      if (!any) continue;
      const int pv = graph.add_vertex(Vertex::point3(lm.point, false));
      point_vertex[lm.id] = pv;
      int anchors = 0;
      for (const PointObsRecord& o : lm.point_obs) {
        const bool in_window = o.frame >= wstart;
        if (!in_window && anchors >= cfg_.point_anchor_obs) continue;
        if (!in_window) ++anchors;
        graph.add_factor(Factor::point_reproj(
            ensure_pose(o.frame, in_window), pv, o.pixel,
            cfg_.reproj_weight));
      }
    }

    // Stable objects observed in the window.
    std::map<int, int> object_vertex;
    if (mode_has_objects(cfg_.mode)) {
      for (MapLandmark& lm : map_.landmarks) {
        if (lm.type != LandmarkType::Object ||
            lm.state != LandmarkState::Stable) {
          continue;
        }
        if (lm.last_observed() < wstart) continue;
        const int ov = graph.add_vertex(Vertex::cuboid(lm.cuboid, false));
        object_vertex[lm.id] = ov;
        add_box_factors(lm, ov, wstart, ensure_pose, &graph);
      }
    }

    // Stable planes observed in the window.
    std::map<int, int> plane_vertex;
    if (mode_has_planes(cfg_.mode)) {
      for (MapLandmark& lm : map_.landmarks) {
        if ((lm.type != LandmarkType::PlaneFree &&
             lm.type != LandmarkType::PlaneManhattan) ||
            lm.state != LandmarkState::Stable) {
          continue;
        }
        if (lm.last_observed() < wstart) continue;
        const int pv = graph.add_vertex(
            lm.type == LandmarkType::PlaneManhattan
                ? Vertex::manhattan(lm.mplane, false)
                : Vertex::plane4(lm.plane, false));
        plane_vertex[lm.id] = pv;
        add_edge_factors(lm, pv, wstart, ensure_pose, &graph);
        int budget = cfg_.max_point_plane;
        for (int pid : lm.supporting_points) {
          if (budget == 0) break;
          const auto it = point_vertex.find(pid);
          if (it == point_vertex.end()) continue;
          graph.add_factor(Factor::point_plane(it->second, pv,
                                               cfg_.point_plane_weight));
          --budget;
        }
      }
      // Non-penetration coupling between co-visible objects and planes.
      const Vec3 cam_center = map_.frames[fidx].pose.translation;
      for (const auto& [oid, ov] : object_vertex) {
        for (const auto& [pid, pv] : plane_vertex) {
          const Plane pl = map_.landmarks[pid].plane_estimate();
          const int sign = pl.evaluate(cam_center) >= 0 ? 1 : -1;
          graph.add_factor(Factor::object_plane(ov, pv, sign,
                                                cfg_.object_plane_weight));
        }
      }
    }

    const OptimizeResult res = optimize(graph, cfg_.window_solver);
    d->ba_cost = res.final_cost;
    d->ba_iterations = res.iterations;

    for (const auto& [frame, v] : pose_vertex) {
      if (!graph.vertices[v].fixed) {
        map_.frames[frame].pose = graph.vertices[v].pose;
      }
    }
    for (const auto& [lid, v] : point_vertex) {
      map_.landmarks[lid].point = graph.vertices[v].point;
    }
    for (const auto& [lid, v] : object_vertex) {
      map_.landmarks[lid].cuboid =
          Cuboid(graph.vertices[v].pose, graph.vertices[v].dims);
    }
    for (const auto& [lid, v] : plane_vertex) {
      MapLandmark& lm = map_.landmarks[lid];
      if (lm.type == LandmarkType::PlaneManhattan) {
        lm.mplane = graph.vertices[v].mplane;
        lm.plane = lm.mplane.to_plane();
      } else {
        lm.plane = Plane(graph.vertices[v].plane);
      }
    }
  }

  double box_weight(const MapLandmark& lm, const BoxObsRecord& o) const {
    const double dist = (lm.cuboid.pose.translation -
                         map_.frames[o.frame].pose.translation)
                            .norm();
    return cfg_.camera_object_weight * object_weight(dist, o.confidence);
  }

  template <typename EnsurePose>
  void add_box_factors(const MapLandmark& lm, int ov, int wstart,
                       const EnsurePose& ensure_pose, FactorGraph* graph) {
    std::vector<const BoxObsRecord*> older;
    for (const BoxObsRecord& o : lm.box_obs) {
      if (o.frame >= wstart) {
        graph->add_factor(Factor::camera_object(ensure_pose(o.frame, true),
                                                ov, o.box,
                                                box_weight(lm, o)));
      } else {
        older.push_back(&o);
      }
    }
    const int stride =
        older.empty() ? 1
                      : int(older.size() + cfg_.max_old_box_obs - 1) /
                            cfg_.max_old_box_obs;
    for (int i = 0; i < int(older.size()); i += stride) {
      graph->add_factor(Factor::camera_object(
          ensure_pose(older[i]->frame, false), ov, older[i]->box,
          box_weight(lm, *older[i])));
    }
  }

  template <typename EnsurePose>
  void add_edge_factors(const MapLandmark& lm, int pv, int wstart,
                        const EnsurePose& ensure_pose, FactorGraph* graph) {
    std::vector<const EdgeObsRecord*> older;
    for (const EdgeObsRecord& o : lm.edge_obs) {
      if (o.frame >= wstart) {
        graph->add_factor(Factor::camera_plane(ensure_pose(o.frame, true),
                                               pv, o.edge,
                                               cfg_.camera_plane_weight));
      } else {
        older.push_back(&o);
      }
    }
    const int stride =
        older.empty() ? 1
                      : int(older.size() + cfg_.max_old_edge_obs - 1) /
                            cfg_.max_old_edge_obs;
    for (int i = 0; i < int(older.size()); i += stride) {
      graph->add_factor(Factor::camera_plane(
          ensure_pose(older[i]->frame, false), pv, older[i]->edge,
          cfg_.camera_plane_weight));
    }
  }

  void prune_pending(int fidx) {
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (fidx - it->second.last_seen > cfg_.pending_max_age) {
        it = pending_.erase(it);
      } else {
        ++it;
      }
    }
  }

  PipelineConfig cfg_;
  SlamMap map_;
  Pose initial_pose_;
  std::map<int, PendingTrack> pending_;  ///< ordered: landmark ids must be
                                         ///< reproducible across runs
  std::vector<FrameDiagnostics> diags_;
};

}  // namespace opslam

#endif  // OPSLAM_SLAM_PIPELINE_HPP_
