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
#ifndef OPSLAM_SLAM_LIFT_HPP_
#define OPSLAM_SLAM_LIFT_HPP_

#include <vector>

#include "opslam/crf/proposals.hpp"
#include "opslam/geometry/angle_interval.hpp"
#include "opslam/geometry/raycast.hpp"
#include "opslam/slam/frame.hpp"

namespace opslam {

/// Plane proposal lifted to world coordinates under a pose estimate.
struct LiftedPlane {
  PlaneProposal prop;
  Plane plane;
  Vec3 g0 = Vec3::Zero();
  Vec3 g1 = Vec3::Zero();
};

/// Back-projects a ground-edge proposal onto the ground plane and builds the
/// vertical wall plane through it. Returns false for edges that do not hit
/// the ground in front of the camera or degenerate to a point.
inline bool lift_plane_proposal(const CameraIntrinsics& intr,
                                const Plane& ground, const Pose& pose,
                                const PlaneProposalObs& obs,
                                LiftedPlane* out) {
  try {
    const double t0 = ray_structure_depth(intr, pose, obs.edge.p0, ground);
    const double t1 = ray_structure_depth(intr, pose, obs.edge.p1, ground);
    out->g0 = pose.apply(intr.unproject(obs.edge.p0) * t0);
    out->g1 = pose.apply(intr.unproject(obs.edge.p1) * t1);
    out->prop.edge = obs.edge;
    out->prop.edge3d = {out->g0, out->g1};
    out->prop.contour_dist = obs.contour_dist;
    out->prop.fov_angle =
        angle_interval(out->g0, out->g1, pose.translation).extent;
    out->plane = proposal_wall_plane(out->prop);
    return true;
  } catch (const NoIntersection&) {
    return false;
  } catch (const DegenerateEdge&) {
    return false;
  }
}

/// Lifts every proposal of a frame into world coordinates under `pose`.
inline void lift_frame_proposals(const CameraIntrinsics& intr,
                                 const Plane& ground, const Pose& pose,
                                 const FrameInput& frame, bool with_planes,
                                 bool with_objects,
                                 std::vector<LiftedPlane>* planes,
                                 std::vector<CuboidProposal>* cuboids) {
  if (with_planes) {
    for (const PlaneProposalObs& obs : frame.plane_proposals) {
      LiftedPlane lp;
      if (lift_plane_proposal(intr, ground, pose, obs, &lp)) {
        planes->push_back(lp);
      }
    }
  }
  if (with_objects) {
    for (const CuboidProposalObs& obs : frame.cuboid_proposals) {
      CuboidProposal p;
      p.cuboid = Cuboid(pose * obs.cuboid_cam.pose, obs.cuboid_cam.dims)
                     .snapped_to_yaw();
      p.instance_id = obs.detection;
      p.fit_error = obs.fit_error;
      cuboids->push_back(p);
    }
  }
}

}  // namespace opslam

#endif  // OPSLAM_SLAM_LIFT_HPP_
