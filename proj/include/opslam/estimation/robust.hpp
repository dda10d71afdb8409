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
#ifndef OPSLAM_ESTIMATION_ROBUST_HPP_
#define OPSLAM_ESTIMATION_ROBUST_HPP_

#include <algorithm>
#include <cmath>

namespace opslam {

struct RobustResult {
  double cost = 0.0;   // Huber cost of the residual norm
  double scale = 1.0;  // IRLS reweighting factor for J and r
};

/// Huber loss on the residual norm: quadratic inside delta, linear outside.
inline RobustResult robustify(double residual_norm, double huber_delta) {
  RobustResult out;
  if (residual_norm <= huber_delta) {
    out.cost = residual_norm * residual_norm;
    out.scale = 1.0;
  } else {
    out.cost = huber_delta * (2.0 * residual_norm - huber_delta);
    out.scale = huber_delta / residual_norm;
  }
  return out;
}

/// Information weight for a camera-object factor: confidence attenuated by
/// distance beyond d0, floored.
inline double object_weight(double dist_to_cam, double confidence,
                            double d0 = 5.0) {
  const double w = confidence * std::min(1.0, d0 / std::max(dist_to_cam, 1e-6));
  return std::max(w, 0.05);
}

}  // namespace opslam

#endif  // OPSLAM_ESTIMATION_ROBUST_HPP_
