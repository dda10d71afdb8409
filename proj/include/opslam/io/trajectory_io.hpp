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
#ifndef OPSLAM_IO_TRAJECTORY_IO_HPP_
#define OPSLAM_IO_TRAJECTORY_IO_HPP_

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslam/slam/metrics.hpp"

namespace opslam {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

/// One trajectory line: `timestamp tx ty tz qx qy qz qw`, 9 significant
/// digits, space separated. The quaternion is canonicalized to qw >= 0 so
/// output is unique per pose.
inline std::string format_trajectory_line(const TimedPose& tp) {
  Quat q = tp.pose.quaternion();
  if (q.w() < 0) q.coeffs() = -q.coeffs();
  const double vals[8] = {tp.timestamp,
                          tp.pose.translation.x(),
                          tp.pose.translation.y(),
                          tp.pose.translation.z(),
                          q.x(),
                          q.y(),
                          q.z(),
                          q.w()};
  std::string line;
  char buf[64];
  for (int i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", vals[i]);
    if (i) line += ' ';
    line += buf;
  }
  return line;
}

inline void write_trajectory(const std::string& path,
                             const std::vector<TimedPose>& traj) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const TimedPose& tp : traj) out << format_trajectory_line(tp) << '\n';
}

inline std::vector<TimedPose> read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<TimedPose> traj;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double t, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> t >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": malformed trajectory line");
    }
    Quat q(qw, qx, qy, qz);
    if (q.norm() < 1e-12) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": zero quaternion");
    }
    q.normalize();
    TimedPose tp;
    tp.timestamp = t;
    tp.pose = Pose(q.toRotationMatrix(), Vec3(tx, ty, tz));
    traj.push_back(tp);
  }
  return traj;
}

}  // namespace opslam

#endif  // OPSLAM_IO_TRAJECTORY_IO_HPP_
