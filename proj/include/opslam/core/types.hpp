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
#ifndef OPSLAM_CORE_TYPES_HPP_
#define OPSLAM_CORE_TYPES_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace opslam {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using MatX = Eigen::MatrixXd;
using Quat = Eigen::Quaterniond;

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Geometry-level failure modes. Factor evaluation catches these and
// deactivates the offending measurement instead of aborting.
struct DegenerateRay : std::runtime_error {
  explicit DegenerateRay(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateEdge : std::runtime_error {
  explicit DegenerateEdge(const std::string& m) : std::runtime_error(m) {}
};
struct BehindCamera : std::runtime_error {
  explicit BehindCamera(const std::string& m) : std::runtime_error(m) {}
};
struct NotUpright : std::runtime_error {
  explicit NotUpright(const std::string& m) : std::runtime_error(m) {}
};
struct NoIntersection : std::runtime_error {
  explicit NoIntersection(const std::string& m) : std::runtime_error(m) {}
};
struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& m) : std::runtime_error(m) {}
};
struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& m) : std::runtime_error(m) {}
};
struct TrackingLost : std::runtime_error {
  explicit TrackingLost(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace opslam

#endif  // OPSLAM_CORE_TYPES_HPP_
