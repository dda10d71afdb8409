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
#ifndef OPSLAM_IO_REPORT_HPP_
#define OPSLAM_IO_REPORT_HPP_

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opslam/io/trajectory_io.hpp"
#include "opslam/slam/metrics.hpp"

namespace opslam {
namespace io {

/// Machine-readable run summary. Identical runs serialize byte-identically;
/// wall-clock timing is therefore opt-in (`with_timing`).
struct RunReport {
  std::string config_hash;
  uint64_t seed = 0;
  std::string mode;
  int frames = 0;
  AteResult ate;
  std::vector<double> per_frame_errors;  // translation error per frame (m)
  double mean_object_iou = -1.0;         // -1 when no GT scene was given
  int crf_frames = 0;
  double crf_energy_mean = 0.0;
  double crf_energy_min = 0.0;
  double crf_energy_max = 0.0;
  std::map<std::string, int> counters;
  bool with_timing = false;
  double tracking_ms_mean = 0.0;
  double crf_ms_mean = 0.0;
  double ba_ms_mean = 0.0;
};

inline nlohmann::json report_json(const RunReport& r) {
  nlohmann::json j{
      {"config_hash", r.config_hash},
      {"seed", r.seed},
      {"mode", r.mode},
      {"frames", r.frames},
      {"ate", {{"rmse", r.ate.rmse}, {"mean", r.ate.mean}, {"max", r.ate.max}}},
      {"per_frame_errors", r.per_frame_errors},
      {"mean_object_iou", r.mean_object_iou},
      {"crf",
       {{"frames", r.crf_frames},
        {"energy_mean", r.crf_energy_mean},
        {"energy_min", r.crf_energy_min},
        {"energy_max", r.crf_energy_max}}},
      {"counters", r.counters}};
  if (r.with_timing) {
    j["timing"] = {{"tracking_ms_mean", r.tracking_ms_mean},
                   {"crf_ms_mean", r.crf_ms_mean},
                   {"ba_ms_mean", r.ba_ms_mean}};
  }
  return j;
}

inline void write_report(const std::string& path, const RunReport& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << report_json(r).dump(2) << '\n';
}

}  // namespace io
}  // namespace opslam

#endif  // OPSLAM_IO_REPORT_HPP_
