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
#ifndef OPSLAM_CRF_PROPOSALS_HPP_
#define OPSLAM_CRF_PROPOSALS_HPP_

#include <array>

#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"

namespace opslam {

/// Candidate layout plane: a wall-ground image edge with its back-projected
/// 3D ground segment, the azimuth angle it subtends at the camera, and the
/// normalized contour distance score in [0, 1] (0 = on the contour).
struct PlaneProposal {
  GroundEdge2D edge;
  std::array<Vec3, 2> edge3d;
  double fov_angle = 0.0;
  double contour_dist = 0.0;
};

/// Candidate object cuboid with the 2D instance it explains and a
/// normalized fitting error in [0, 1] (0 = best).
struct CuboidProposal {
  Cuboid cuboid;
  int instance_id = -1;
  double fit_error = 0.0;
};

/// Vertical plane through the ground segment of a proposal.
inline Plane proposal_wall_plane(const PlaneProposal& p) {
  const Vec3 dir = p.edge3d[1] - p.edge3d[0];
  return Plane::through_point(dir.cross(Vec3::UnitZ()), p.edge3d[0]);
}

}  // namespace opslam

#endif  // OPSLAM_CRF_PROPOSALS_HPP_
