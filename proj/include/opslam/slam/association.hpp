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
#ifndef OPSLAM_SLAM_ASSOCIATION_HPP_
#define OPSLAM_SLAM_ASSOCIATION_HPP_

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "opslam/slam/map.hpp"

namespace opslam {

/// Count of common elements between two sorted sets.
inline int shared_count(const std::set<int>& a, const std::set<int>& b) {
  int n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

/// Detection-to-landmark match by shared supporting points.
struct ObjectMatch {
  int detection = -1;
  int landmark = -1;
  int shared = 0;
};

/// Matches detections to object landmarks by the number of shared point
/// landmarks inside each detection box. One-to-one, greedy by descending
/// shared count; ties prefer the lower landmark id, then the lower detection
/// index. Detections sharing fewer than min_shared points with every
/// landmark stay unmatched (new-landmark proposals).
inline std::vector<ObjectMatch> associate_objects(
    const SlamMap& map, const std::vector<std::set<int>>& detection_points,
    int min_shared = 3) {
  std::vector<ObjectMatch> pairs;
  for (int d = 0; d < int(detection_points.size()); ++d) {
    for (const MapLandmark& lm : map.landmarks) {
      if (lm.type != LandmarkType::Object || !lm.alive()) continue;
      const int n = shared_count(detection_points[d], lm.supporting_points);
      if (n >= min_shared) pairs.push_back({d, lm.id, n});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const ObjectMatch& a, const ObjectMatch& b) {
              if (a.shared != b.shared) return a.shared > b.shared;
              if (a.landmark != b.landmark) return a.landmark < b.landmark;
              return a.detection < b.detection;
            });
  std::vector<ObjectMatch> out;
  std::set<int> used_det, used_lm;
  for (const ObjectMatch& m : pairs) {
    if (used_det.count(m.detection) || used_lm.count(m.landmark)) continue;
    used_det.insert(m.detection);
    used_lm.insert(m.landmark);
    out.push_back(m);
  }
  return out;
}

/// True if two planes pass the association gates: normal difference within
/// max_angle after sign alignment and |d_a - d_b| <= max_offset in the
/// aligned frame.
inline bool planes_compatible(const Plane& a, const Plane& b,
                              double max_angle_rad, double max_offset) {
  double dot = a.normal().dot(b.normal());
  double db = b.offset();
  if (dot < 0) {
    dot = -dot;
    db = -db;
  }
  const double angle = std::acos(std::min(1.0, std::max(-1.0, dot)));
  if (angle > max_angle_rad) return false;
  return std::abs(a.offset() - db) <= max_offset;
}

/// Finds the plane landmark matching a lifted candidate plane, or -1. Among
/// landmarks passing the 30-degree / 1-meter gates, picks the one sharing
/// the most supporting points with the candidate; ties prefer the lower id.
/// `taken` lists landmark ids already claimed this frame (one-to-one).
inline int associate_plane(const SlamMap& map, const Plane& candidate,
                           const std::set<int>& candidate_points,
                           const std::set<int>& taken,
                           double max_angle_rad = deg2rad(30.0),
                           double max_offset = 1.0) {
  int best = -1;
  int best_shared = -1;
  for (const MapLandmark& lm : map.landmarks) {
    if (!lm.alive()) continue;
    if (lm.type != LandmarkType::PlaneFree &&
        lm.type != LandmarkType::PlaneManhattan) {
      continue;
    }
    if (taken.count(lm.id)) continue;
    if (!planes_compatible(candidate, lm.plane_estimate(), max_angle_rad,
                           max_offset)) {
      continue;
    }
    const int n = shared_count(candidate_points, lm.supporting_points);
    if (n > best_shared) {
      best_shared = n;
      best = lm.id;
    }
  }
  return best;
}

}  // namespace opslam

#endif  // OPSLAM_SLAM_ASSOCIATION_HPP_
