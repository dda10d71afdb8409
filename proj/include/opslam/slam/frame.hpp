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
#ifndef OPSLAM_SLAM_FRAME_HPP_
#define OPSLAM_SLAM_FRAME_HPP_

#include <vector>

#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"
#include "opslam/geometry/pose.hpp"

namespace opslam {

/// One tracked feature measurement. `corrupted` records whether the track id
/// was deliberately mis-assigned by the front end; it is diagnostics-only and
/// must not be consumed by the pipeline.
struct PointObservation {
  Vec2 pixel = Vec2::Zero();
  int track_id = -1;
  bool corrupted = false;
};

/// One 2D object detection. `instance` is the ground-truth instance hint
/// (-1 for spurious detections); diagnostics-only, withheld from association.
struct ObjectDetection {
  BBox2D box;
  double confidence = 1.0;
  int instance = -1;
};

/// Plane proposal payload as emitted by the front end: the image edge plus
/// its normalized contour-distance score. The 3D geometry is recovered by
/// the consumer by back-projection under its own pose estimate.
struct PlaneProposalObs {
  GroundEdge2D edge;
  double contour_dist = 0.0;
};

/// Cuboid proposal payload in the camera frame of the emitting view;
/// `detection` indexes this frame's detections list.
struct CuboidProposalObs {
  Cuboid cuboid_cam;
  int detection = -1;
  double fit_error = 0.0;
};

/// Everything the per-frame pipeline consumes for one image. `gt_pose` is
/// simulator truth carried for evaluation; the pipeline never reads it.
struct FrameInput {
  int frame_id = 0;
  double timestamp = 0.0;
  Pose gt_pose;
  Pose odom;  // relative pose previous->this in the previous camera frame
  std::vector<PointObservation> points;
  std::vector<ObjectDetection> detections;
  std::vector<GroundEdge2D> edges;
  std::vector<PlaneProposalObs> plane_proposals;
  std::vector<CuboidProposalObs> cuboid_proposals;
};

/// Stream-level constants shared by every frame of a sequence.
struct SequenceHeader {
  CameraIntrinsics intrinsics;
  Plane world_ground = Plane(Vec4(0, 0, 1, 0));
  Pose initial_pose;  // ground-truth first pose; fixes gauge and scale
};

}  // namespace opslam

#endif  // OPSLAM_SLAM_FRAME_HPP_
