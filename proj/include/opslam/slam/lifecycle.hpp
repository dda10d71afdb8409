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
#ifndef OPSLAM_SLAM_LIFECYCLE_HPP_
#define OPSLAM_SLAM_LIFECYCLE_HPP_

#include "opslam/slam/map.hpp"

namespace opslam {

struct LifecycleConfig {
  int promote_min_obs = 3;   ///< observed frames required within the window
  int obs_window = 15;       ///< trailing frame window for the rule above
  int min_support = 10;      ///< stable supporting points (objects, planes)
  int cull_age = 15;         ///< candidates at least this old must qualify
};

struct LifecycleActions {
  int promoted = 0;
  int culled = 0;
};

/// True if the landmark currently satisfies the promotion gates.
inline bool passes_stability_gates(const SlamMap& map, const MapLandmark& lm,
                                   int frame, const LifecycleConfig& cfg) {
  if (lm.recent_observations(frame, cfg.obs_window) < cfg.promote_min_obs) {
    return false;
  }
  if (lm.type == LandmarkType::Object || lm.type == LandmarkType::PlaneFree ||
      lm.type == LandmarkType::PlaneManhattan) {
    if (map.stable_support(lm) < cfg.min_support) return false;
  }
  return true;
}

/// Promotes candidates that pass the observation and support gates and culls
/// candidates that are cull_age frames old and still failing. Once Stable a
/// landmark is kept; the Manhattan direction gate applies at plane creation
/// and is enforced by the caller.
inline LifecycleActions lifecycle_update(SlamMap* map, int frame,
                                         const LifecycleConfig& cfg = {}) {
  LifecycleActions acts;
  for (MapLandmark& lm : map->landmarks) {
    if (lm.state != LandmarkState::Candidate) continue;
    if (passes_stability_gates(*map, lm, frame, cfg)) {
      lm.state = LandmarkState::Stable;
      ++acts.promoted;
    } else if (frame - lm.created_frame >= cfg.cull_age) {
      lm.state = LandmarkState::Culled;
      ++acts.culled;
    }
  }
  return acts;
}

/// Creation-time Manhattan gate: true if the plane normal is within
/// max_angle of some signed world axis.
inline bool within_manhattan_gate(const Plane& p, double max_angle_rad) {
  bool ok = false;
  ManhattanPlane::from_plane(p, max_angle_rad, &ok);
  return ok;
}

}  // namespace opslam

#endif  // OPSLAM_SLAM_LIFECYCLE_HPP_
