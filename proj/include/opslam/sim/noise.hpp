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
#ifndef OPSLAM_SIM_NOISE_HPP_
#define OPSLAM_SIM_NOISE_HPP_

namespace opslam {

/// Measurement corruption knobs. All default to zero so a default-constructed
/// spec produces exact, noiseless observations.
struct NoiseSpec {
  double pixel_sigma = 0.0;             ///< keypoint pixel noise, px
  double bbox_sigma = 0.0;              ///< detection center/size noise, px
  double edge_endpoint_sigma = 0.0;     ///< ground-edge endpoint noise, px
  double contour_jitter_sigma = 0.0;    ///< drives edge contour distance
  double detection_dropout_prob = 0.0;  ///< per visible object per frame
  double outlier_detection_prob = 0.0;  ///< spurious box per object per frame
  double track_id_corruption_prob = 0.0;  ///< wrong-id keypoint fraction
  double spurious_edge_prob = 0.0;      ///< extra wrong plane proposal rate
  double odom_trans_bias = 0.0;         ///< m/frame along camera forward
  double odom_rot_bias_deg = 0.0;       ///< deg/frame about camera y
  double odom_trans_sigma = 0.0;        ///< m, isotropic
  double odom_rot_sigma_deg = 0.0;      ///< deg, isotropic
};

/// Cuboid proposal generation knobs for the single-image detector front end.
struct ProposalNoiseSpec {
  int proposals_per_instance = 6;  ///< at most 15 per detection
  double trans_sigma = 0.15;       ///< m, proposal center perturbation
  double yaw_sigma_deg = 8.0;      ///< deg, proposal yaw perturbation
  double dims_sigma = 0.08;        ///< m, proposal dimension perturbation
  double near_gt_prob = 0.9;       ///< chance the first proposal is near-true
  double fit_alpha = 1.0;          ///< fit error slope vs true pose error
  double fit_beta = 0.0;           ///< fit error noise level
};

}  // namespace opslam

#endif  // OPSLAM_SIM_NOISE_HPP_
