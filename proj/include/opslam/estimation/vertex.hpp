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
#ifndef OPSLAM_ESTIMATION_VERTEX_HPP_
#define OPSLAM_ESTIMATION_VERTEX_HPP_

#include <cmath>

#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/plane.hpp"

namespace opslam {

enum class VertexKind { CameraPose, Point3, CuboidVertex, PlaneVertex,
                        ManhattanPlaneVertex };

/// Deterministic orthonormal basis of the tangent space of the unit
/// 4-sphere at pi (columns orthogonal to pi), built from the Householder
/// reflection mapping pi onto a coordinate axis.
inline Eigen::Matrix<double, 4, 3> plane_tangent_basis(const Vec4& pi) {
  int k = 0;
  pi.cwiseAbs().maxCoeff(&k);
  Vec4 v = pi;
  v[k] += (pi[k] >= 0 ? 1.0 : -1.0) * pi.norm();
  const Mat4 h = Mat4::Identity() - (2.0 / v.squaredNorm()) * v * v.transpose();
  Eigen::Matrix<double, 4, 3> basis;
  int col = 0;
  for (int j = 0; j < 4; ++j) {
    if (j == k) continue;
    basis.col(col++) = h.col(j);
  }
  return basis;
}

/// Exponential map on the unit 4-sphere.
inline Vec4 sphere_retract(const Vec4& pi, const Vec3& delta,
                           const Eigen::Matrix<double, 4, 3>& basis) {
  const double th = delta.norm();
  if (th < 1e-12) return (pi + basis * delta).normalized();
  return std::cos(th) * pi + (std::sin(th) / th) * (basis * delta);
}

/// Typed state block. One payload group is active per kind:
/// CameraPose uses pose; Point3 uses point; CuboidVertex uses pose + dims;
/// PlaneVertex uses plane (unit 4-vector, sign free during optimization);
/// ManhattanPlaneVertex uses mplane.
struct Vertex {
  VertexKind kind = VertexKind::Point3;
  bool fixed = false;

  Pose pose;
  Vec3 point = Vec3::Zero();
  Vec3 dims = Vec3::Ones();
  Vec4 plane = Vec4(0, 0, 1, 0);
  ManhattanPlane mplane;

  static Vertex camera(const Pose& p, bool fix = false) {
    Vertex v;
    v.kind = VertexKind::CameraPose;
    v.pose = p;
    v.fixed = fix;
    return v;
  }
  static Vertex point3(const Vec3& p, bool fix = false) {
    Vertex v;
    v.kind = VertexKind::Point3;
    v.point = p;
    v.fixed = fix;
    return v;
  }
  static Vertex cuboid(const Cuboid& c, bool fix = false) {
    Vertex v;
    v.kind = VertexKind::CuboidVertex;
    v.pose = c.pose;
    v.dims = c.dims;
    v.fixed = fix;
    return v;
  }
  static Vertex plane4(const Plane& p, bool fix = false) {
    Vertex v;
    v.kind = VertexKind::PlaneVertex;
    v.plane = p.coeffs;
    v.fixed = fix;
    return v;
  }
  static Vertex manhattan(const ManhattanPlane& mp, bool fix = false) {
    Vertex v;
    v.kind = VertexKind::ManhattanPlaneVertex;
    v.mplane = mp;
    v.fixed = fix;
    return v;
  }

  int dof() const {
    switch (kind) {
      case VertexKind::CameraPose: return 6;
      case VertexKind::Point3: return 3;
      case VertexKind::CuboidVertex: return 9;
      case VertexKind::PlaneVertex: return 3;
      case VertexKind::ManhattanPlaneVertex: return 1;
    }
    return 0;
  }

  Cuboid as_cuboid() const { return Cuboid(pose, dims); }

  /// Normalized homogeneous plane coefficients of a plane-like vertex.
  Vec4 plane_coeffs() const {
    if (kind == VertexKind::ManhattanPlaneVertex) {
      return mplane.raw_coeffs() / mplane.raw_coeffs().norm();
    }
    return plane;
  }

  /// Manifold update by a local tangent increment of size dof().
  void retract(const VecX& delta) {
    switch (kind) {
      case VertexKind::CameraPose:
        pose = pose.retract(delta.head<3>(), delta.segment<3>(3));
        break;
      case VertexKind::Point3:
        point += delta.head<3>();
        break;
      case VertexKind::CuboidVertex:
        pose = pose.retract(delta.head<3>(), delta.segment<3>(3));
        dims = dims.cwiseProduct(delta.segment<3>(6).array().exp().matrix());
        break;
      case VertexKind::PlaneVertex:
        plane = sphere_retract(plane, delta.head<3>(),
                               plane_tangent_basis(plane));
        break;
      case VertexKind::ManhattanPlaneVertex:
        mplane.dist += delta[0];
        break;
    }
  }
};

}  // namespace opslam

#endif  // OPSLAM_ESTIMATION_VERTEX_HPP_
