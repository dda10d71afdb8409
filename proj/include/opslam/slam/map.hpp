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
#ifndef OPSLAM_SLAM_MAP_HPP_
#define OPSLAM_SLAM_MAP_HPP_

#include <set>
#include <unordered_map>
#include <vector>

#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"
#include "opslam/geometry/pose.hpp"

namespace opslam {

enum class LandmarkState { Candidate, Stable, Culled };
enum class LandmarkType { Point, Object, PlaneFree, PlaneManhattan };

inline const char* to_string(LandmarkState s) {
  switch (s) {
    case LandmarkState::Candidate: return "candidate";
    case LandmarkState::Stable: return "stable";
    default: return "culled";
  }
}

inline const char* to_string(LandmarkType t) {
  switch (t) {
    case LandmarkType::Point: return "point";
    case LandmarkType::Object: return "object";
    case LandmarkType::PlaneFree: return "plane";
    default: return "plane_manhattan";
  }
}

struct PointObsRecord {
  int frame = -1;
  Vec2 pixel = Vec2::Zero();
};

struct BoxObsRecord {
  int frame = -1;
  BBox2D box;
  double confidence = 1.0;
};

struct EdgeObsRecord {
  int frame = -1;
  GroundEdge2D edge;
};

/// One map entry of any kind. Ids index the map's landmark vector and are
/// never reused; culled entries stay in place so ids remain valid.
struct MapLandmark {
  int id = -1;
  LandmarkType type = LandmarkType::Point;
  LandmarkState state = LandmarkState::Candidate;
  int created_frame = 0;

  // Point payload and provenance.
  Vec3 point = Vec3::Zero();
  int track_id = -1;
  bool from_structure = false;

  // Object / plane payloads.
  Cuboid cuboid;
  Plane plane;
  ManhattanPlane mplane;
  // Ground-extent endpoints of a plane landmark (world frame, z = 0).
  Vec3 base0 = Vec3::Zero();
  Vec3 base1 = Vec3::Zero();

  std::vector<PointObsRecord> point_obs;
  std::vector<BoxObsRecord> box_obs;
  std::vector<EdgeObsRecord> edge_obs;
  std::vector<int> observing_frames;
  std::set<int> supporting_points;  ///< point landmark ids

  bool alive() const { return state != LandmarkState::Culled; }

  int last_observed() const {
    return observing_frames.empty() ? -1 : observing_frames.back();
  }

  void record_frame(int frame) {
    if (observing_frames.empty() || observing_frames.back() != frame) {
      observing_frames.push_back(frame);
    }
  }

  /// Number of distinct observed frames in (frame - window, frame].
  int recent_observations(int frame, int window) const {
    int n = 0;
    for (auto it = observing_frames.rbegin(); it != observing_frames.rend();
         ++it) {
      if (*it <= frame - window) break;
      if (*it <= frame) ++n;
    }
    return n;
  }

  /// The plane payload as a general plane, whatever the representation.
  Plane plane_estimate() const {
    return type == LandmarkType::PlaneManhattan ? mplane.to_plane() : plane;
  }
};

/// Per-frame state kept by the pipeline. The ground-truth pose is carried
/// only for evaluation and diagnostics.
struct FrameState {
  int frame_id = -1;
  double timestamp = 0.0;
  Pose pose;
  Pose gt_pose;
  Pose odom;
};

struct SlamMap {
  CameraIntrinsics intrinsics;
  Plane ground = Plane(Vec4(0, 0, 1, 0));
  std::vector<FrameState> frames;
  std::vector<MapLandmark> landmarks;
  std::unordered_map<int, int> track_to_landmark;

  MapLandmark& add_landmark(LandmarkType type, int frame) {
    MapLandmark lm;
    lm.id = int(landmarks.size());
    lm.type = type;
    lm.created_frame = frame;
    landmarks.push_back(std::move(lm));
    return landmarks.back();
  }

  int count(LandmarkType type, LandmarkState state) const {
    int n = 0;
    for (const MapLandmark& lm : landmarks) {
      if (lm.type == type && lm.state == state) ++n;
    }
    return n;
  }

  /// Supporting points that are currently Stable.
  int stable_support(const MapLandmark& lm) const {
    int n = 0;
    for (int pid : lm.supporting_points) {
      if (landmarks[pid].state == LandmarkState::Stable) ++n;
    }
    return n;
  }
};

}  // namespace opslam

#endif  // OPSLAM_SLAM_MAP_HPP_
