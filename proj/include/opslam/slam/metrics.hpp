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
#ifndef OPSLAM_SLAM_METRICS_HPP_
#define OPSLAM_SLAM_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "opslam/geometry/intersection.hpp"
#include "opslam/geometry/pose.hpp"

namespace opslam {

struct TimedPose {
  double timestamp = 0.0;
  Pose pose;
};

struct AteResult {
  double rmse = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

/// Absolute translation error between two trajectories associated by
/// timestamp, without any alignment (scale is fixed by initialization).
inline AteResult evaluate_ate(const std::vector<TimedPose>& est,
                              const std::vector<TimedPose>& gt,
                              double stamp_tol = 1e-9) {
  if (est.size() != gt.size()) {
    throw std::invalid_argument("evaluate_ate: trajectory length mismatch");
  }
  AteResult r;
  double sum = 0.0, sum_sq = 0.0;
  for (size_t i = 0; i < est.size(); ++i) {
    if (std::abs(est[i].timestamp - gt[i].timestamp) > stamp_tol) {
      throw std::invalid_argument("evaluate_ate: timestamp mismatch");
    }
    const double e =
        (est[i].pose.translation - gt[i].pose.translation).norm();
    sum += e;
    sum_sq += e * e;
    r.max = std::max(r.max, e);
  }
  if (!est.empty()) {
    r.mean = sum / double(est.size());
    r.rmse = std::sqrt(sum_sq / double(est.size()));
  }
  return r;
}

/// Mean 3D IoU over ground-truth objects. Estimates are matched to GT
/// greedily by descending IoU, one-to-one; unmatched GT objects contribute
/// zero.
inline double evaluate_iou(const std::vector<Cuboid>& estimates,
                           const std::vector<Cuboid>& gt) {
  if (gt.empty()) return 0.0;
  struct Cand {
    double iou;
    int est;
    int gt;
  };
  std::vector<Cand> cands;
  for (int e = 0; e < int(estimates.size()); ++e) {
    for (int g = 0; g < int(gt.size()); ++g) {
      const double iou = cuboid_iou_3d(estimates[e], gt[g]);
      if (iou > 0) cands.push_back({iou, e, g});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.gt != b.gt) return a.gt < b.gt;
    return a.est < b.est;
  });
  std::set<int> used_est, used_gt;
  double total = 0.0;
  for (const Cand& c : cands) {
    if (used_est.count(c.est) || used_gt.count(c.gt)) continue;
    used_est.insert(c.est);
    used_gt.insert(c.gt);
    total += c.iou;
  }
  return total / double(gt.size());
}

}  // namespace opslam

#endif  // OPSLAM_SLAM_METRICS_HPP_
