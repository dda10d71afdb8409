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
#ifndef OPSLAM_ESTIMATION_FACTOR_HPP_
#define OPSLAM_ESTIMATION_FACTOR_HPP_

#include <array>
#include <cmath>

#include "opslam/estimation/jacobians.hpp"
#include "opslam/estimation/robust.hpp"
#include "opslam/estimation/vertex.hpp"
#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/raycast.hpp"

namespace opslam {

enum class FactorKind { PointReproj, CameraPlane, CameraObject, ObjectPlane,
                        PointPlane, PosePrior, OdometryPrior };

inline int residual_dim(FactorKind k) {
  switch (k) {
    case FactorKind::PointReproj: return 2;
    case FactorKind::CameraPlane: return 3;
    case FactorKind::CameraObject: return 4;
    case FactorKind::ObjectPlane: return 1;
    case FactorKind::PointPlane: return 1;
    case FactorKind::PosePrior: return 6;
    case FactorKind::OdometryPrior: return 6;
  }
  return 0;
}

/// Measurement binding two vertices (one for priors). Vertex slot meaning:
///   PointReproj   (camera, point)     pixel
///   CameraPlane   (camera, plane)     edge
///   CameraObject  (camera, cuboid)    bbox
///   ObjectPlane   (cuboid, plane)     plane_sign fixes the visible side
///   PointPlane    (point, plane)
///   PosePrior     (camera, -)         meas_pose = absolute pose
///   OdometryPrior (camera_i, camera_j) meas_pose = relative pose i->j
struct Factor {
  FactorKind kind = FactorKind::PointReproj;
  int v0 = -1;
  int v1 = -1;

  Vec2 pixel = Vec2::Zero();
  BBox2D bbox;
  GroundEdge2D edge;
  Pose meas_pose;
  int plane_sign = 1;

  double weight = 1.0;      // information scale (translation rows for priors)
  double rot_weight = 1.0;  // information scale of prior rotation rows
  double huber_delta = 1e30;

  int degenerate_streak = 0;
  bool disabled = false;

  static Factor point_reproj(int cam, int point, const Vec2& obs,
                             double weight = 1.0, double delta = 1.0) {
    Factor f;
    f.kind = FactorKind::PointReproj;
    f.v0 = cam;
    f.v1 = point;
    f.pixel = obs;
    f.weight = weight;
    f.huber_delta = delta;
    return f;
  }
  static Factor camera_plane(int cam, int plane, const GroundEdge2D& edge,
                             double weight = 100.0, double delta = 0.05) {
    Factor f;
    f.kind = FactorKind::CameraPlane;
    f.v0 = cam;
    f.v1 = plane;
    f.edge = edge;
    f.weight = weight;
    f.huber_delta = delta;
    return f;
  }
  static Factor camera_object(int cam, int obj, const BBox2D& bbox,
                              double weight, double delta = 10.0) {
    Factor f;
    f.kind = FactorKind::CameraObject;
    f.v0 = cam;
    f.v1 = obj;
    f.bbox = bbox;
    f.weight = weight;
    f.huber_delta = delta;
    return f;
  }
  static Factor object_plane(int obj, int plane, int sign,
                             double weight = 10.0, double delta = 0.1) {
    Factor f;
    f.kind = FactorKind::ObjectPlane;
    f.v0 = obj;
    f.v1 = plane;
    f.plane_sign = sign;
    f.weight = weight;
    f.huber_delta = delta;
    return f;
  }
  static Factor point_plane(int point, int plane, double weight = 25.0,
                            double delta = 0.1) {
    Factor f;
    f.kind = FactorKind::PointPlane;
    f.v0 = point;
    f.v1 = plane;
    f.weight = weight;
    f.huber_delta = delta;
    return f;
  }
  static Factor pose_prior(int cam, const Pose& prior, double w_trans,
                           double w_rot) {
    Factor f;
    f.kind = FactorKind::PosePrior;
    f.v0 = cam;
    f.meas_pose = prior;
    f.weight = w_trans;
    f.rot_weight = w_rot;
    return f;
  }
  static Factor odometry_prior(int cam_i, int cam_j, const Pose& rel,
                               double w_trans, double w_rot) {
    Factor f;
    f.kind = FactorKind::OdometryPrior;
    f.v0 = cam_i;
    f.v1 = cam_j;
    f.meas_pose = rel;
    f.weight = w_trans;
    f.rot_weight = w_rot;
    return f;
  }
};

struct FactorEval {
  bool ok = true;
  VecX residual;
  MatX j0, j1;  // with respect to the v0/v1 tangents, if requested
};

namespace detail {

/// d(camera-frame point)/d(pose tangent [dt, w]): columns for translation
/// then rotation, with p_c = Exp(-w) R^T (p_w - t - dt).
inline Eigen::Matrix<double, 3, 6> point_in_cam_jacobian(const Mat3& rot,
                                                         const Vec3& pc) {
  Eigen::Matrix<double, 3, 6> j;
  j.block<3, 3>(0, 0) = -rot.transpose();
  j.block<3, 3>(0, 3) = skew(pc);
  return j;
}

/// d(world corner)/d(cuboid tangent [dt, w, log-dims]) for the corner with
/// local coordinates l (signed half dims).
inline Eigen::Matrix<double, 3, 9> corner_world_jacobian(const Mat3& rot,
                                                         const Vec3& l) {
  Eigen::Matrix<double, 3, 9> j;
  j.block<3, 3>(0, 0) = Mat3::Identity();
  j.block<3, 3>(0, 3) = -rot * skew(l);
  j.block<3, 3>(0, 6) = rot * l.asDiagonal();
  return j;
}

/// 4x4 matrix M with M * (n, d) = (R^T n, t.n + d), the plane transform
/// into the camera frame before renormalization.
inline Mat4 plane_transform_matrix(const Pose& cam) {
  Mat4 m = Mat4::Zero();
  m.block<3, 3>(0, 0) = cam.rotation.transpose();
  m.block<1, 3>(3, 0) = cam.translation.transpose();
  m(3, 3) = 1.0;
  return m;
}

/// d(M * pi)/d(pose tangent) for fixed plane coefficients (n, d).
inline Mat46 plane_in_cam_pose_jacobian(const Pose& cam, const Vec4& pi) {
  Mat46 j = Mat46::Zero();
  j.block<3, 3>(0, 3) = skew(cam.rotation.transpose() * pi.head<3>());
  j.block<1, 3>(3, 0) = pi.head<3>().transpose();
  return j;
}

inline double canonical_sign(const Vec4& c) {
  for (int i = 0; i < 4; ++i) {
    if (std::abs(c[i]) > 1e-12) return c[i] < 0 ? -1.0 : 1.0;
  }
  return 1.0;
}

/// Raw plane coefficients of a plane-like vertex for differentiation:
/// the stored unit 4-vector, or the unnormalized Manhattan (axis, d) form
/// whose d-derivative is the unit e4 direction.
inline Vec4 raw_plane_coeffs(const Vertex& v) {
  if (v.kind == VertexKind::ManhattanPlaneVertex) return v.mplane.raw_coeffs();
  return v.plane;
}

/// d(raw coefficients)/d(local tangent): 4x3 sphere basis or 4x1 e4.
inline MatX raw_plane_param_jacobian(const Vertex& v) {
  if (v.kind == VertexKind::ManhattanPlaneVertex) {
    MatX j = MatX::Zero(4, 1);
    j(3, 0) = 1.0;
    return j;
  }
  return plane_tangent_basis(v.plane);
}

}  // namespace detail

/// Residual and Jacobian evaluation. Geometric degeneracies (behind-camera
/// points, grazing rays) set ok = false instead of throwing.
inline FactorEval evaluate_factor(const CameraIntrinsics& K,
                                  const Plane& world_ground,
                                  const std::vector<Vertex>& vx,
                                  const Factor& f, bool want_jac) {
  FactorEval out;
  switch (f.kind) {
    case FactorKind::PointReproj: {
      const Vertex& cam = vx[f.v0];
      const Vertex& pt = vx[f.v1];
      const Vec3 pc = cam.pose.apply_inverse(pt.point);
      if (pc.z() <= 1e-6) {
        out.ok = false;
        return out;
      }
      out.residual = K.project(pc) - f.pixel;
      if (want_jac) {
        const Mat2x3 jp = K.project_jacobian(pc);
        out.j0 = jp * detail::point_in_cam_jacobian(cam.pose.rotation, pc);
        out.j1 = jp * cam.pose.rotation.transpose();
      }
      return out;
    }

    case FactorKind::CameraPlane: {
      const Vertex& cam = vx[f.v0];
      const Vertex& pl = vx[f.v1];
      const Vec4 g = world_ground.coeffs;
      const Vec3 ng = g.head<3>();
      const Mat3 rt = cam.pose.rotation.transpose();

      const Vec3 ray0 = K.unproject(f.edge.p0);
      const Vec3 ray1 = K.unproject(f.edge.p1);
      const Vec3 u = rt * ng;
      const double dg = cam.pose.translation.dot(ng) + g[3];
      const double a0 = u.dot(ray0);
      const double a1 = u.dot(ray1);
      if (std::abs(a0) <= 1e-9 || std::abs(a1) <= 1e-9) {
        out.ok = false;
        return out;
      }
      const double l0 = -dg / a0;
      const double l1 = -dg / a1;
      if (l0 <= 0 || l1 <= 0) {
        out.ok = false;
        return out;
      }
      const Vec3 p0 = l0 * ray0;
      const Vec3 p1 = l1 * ray1;
      if ((p1 - p0).norm() < 1e-6) {
        out.ok = false;
        return out;
      }
      const Vec3 w = (p1 - p0).cross(u);
      Vec4 c;
      c.head<3>() = w;
      c[3] = -w.dot(p0);
      const double sig = detail::canonical_sign(c);
      const Vec4 pi_obs = sig * c / c.norm();

      const Vec4 raw_lm = detail::raw_plane_coeffs(pl);
      const Vec4 m_raw = detail::plane_transform_matrix(cam.pose) * raw_lm;
      const Vec4 pi_cam = m_raw / m_raw.norm();

      Mat34 jl, jr;
      const Vec3 e = plane_log_error_with_jacobian(
          pi_obs, pi_cam, want_jac ? &jl : nullptr, want_jac ? &jr : nullptr);
      out.residual = e;
      if (!want_jac) return out;

      // Observed-plane chain with respect to the pose tangent.
      Eigen::Matrix<double, 3, 6> j_u = Eigen::Matrix<double, 3, 6>::Zero();
      j_u.block<3, 3>(0, 3) = skew(u);
      Eigen::Matrix<double, 1, 6> j_dg = Eigen::Matrix<double, 1, 6>::Zero();
      j_dg.block<1, 3>(0, 0) = ng.transpose();
      const Eigen::Matrix<double, 1, 6> j_l0 =
          (dg / (a0 * a0)) * ray0.transpose() * j_u + (-1.0 / a0) * j_dg;
      const Eigen::Matrix<double, 1, 6> j_l1 =
          (dg / (a1 * a1)) * ray1.transpose() * j_u + (-1.0 / a1) * j_dg;
      const Eigen::Matrix<double, 3, 6> j_p0 = ray0 * j_l0;
      const Eigen::Matrix<double, 3, 6> j_p1 = ray1 * j_l1;
      const Eigen::Matrix<double, 3, 6> j_w =
          -skew(u) * (j_p1 - j_p0) + skew(p1 - p0) * j_u;
      Mat46 j_c;
      j_c.block<3, 6>(0, 0) = j_w;
      j_c.block<1, 6>(3, 0) =
          -p0.transpose() * j_w - w.transpose() * j_p0;
      const Mat46 j_obs_pose = sig * normalize_jacobian(c) * j_c;

      const Mat4 n_cam = normalize_jacobian(m_raw);
      const Mat46 j_cam_pose =
          n_cam * detail::plane_in_cam_pose_jacobian(cam.pose, raw_lm);

      out.j0 = jl * j_obs_pose + jr * j_cam_pose;
      out.j1 = jr * n_cam * detail::plane_transform_matrix(cam.pose) *
               detail::raw_plane_param_jacobian(pl);
      return out;
    }

    case FactorKind::CameraObject: {
      const Vertex& cam = vx[f.v0];
      const Vertex& obj = vx[f.v1];
      std::array<Vec3, 8> pc;
      std::array<Vec3, 8> local;
      std::array<Vec2, 8> uv;
      const Vec3 h = 0.5 * obj.dims;
      for (int k = 0; k < 8; ++k) {
        local[k] = Vec3((k & 1) ? h.x() : -h.x(),
                                (k & 2) ? h.y() : -h.y(),
                                (k & 4) ? h.z() : -h.z());
        const Vec3 pw = obj.pose.apply(local[k]);
        pc[k] = cam.pose.apply_inverse(pw);
        if (pc[k].z() <= 1e-6) {
          out.ok = false;
          return out;
        }
        uv[k] = K.project(pc[k]);
      }
      int lo_idx[2] = {0, 0}, hi_idx[2] = {0, 0};
      for (int k = 1; k < 8; ++k) {
        for (int d = 0; d < 2; ++d) {
          if (uv[k][d] < uv[lo_idx[d]][d]) lo_idx[d] = k;
          if (uv[k][d] > uv[hi_idx[d]][d]) hi_idx[d] = k;
        }
      }
      out.residual = VecX(4);
      for (int d = 0; d < 2; ++d) {
        const double lo = uv[lo_idx[d]][d];
        const double hi = uv[hi_idx[d]][d];
        out.residual[d] = 0.5 * (lo + hi) - f.bbox.center[d];
        out.residual[2 + d] = (hi - lo) - f.bbox.size[d];
      }
      if (!want_jac) return out;

      auto uv_jacobians = [&](int k, Eigen::Matrix<double, 2, 6>* jc,
                              Eigen::Matrix<double, 2, 9>* jo) {
        const Mat2x3 jp = K.project_jacobian(pc[k]);
        *jc = jp * detail::point_in_cam_jacobian(cam.pose.rotation,
                                                 pc[k]);
        *jo = jp * cam.pose.rotation.transpose() *
              detail::corner_world_jacobian(obj.pose.rotation,
                                            local[k]);
      };
      out.j0 = MatX::Zero(4, 6);
      out.j1 = MatX::Zero(4, 9);
      for (int d = 0; d < 2; ++d) {
        Eigen::Matrix<double, 2, 6> jc_lo, jc_hi;
        Eigen::Matrix<double, 2, 9> jo_lo, jo_hi;
        uv_jacobians(lo_idx[d], &jc_lo, &jo_lo);
        uv_jacobians(hi_idx[d], &jc_hi, &jo_hi);
        out.j0.row(d) = 0.5 * (jc_lo.row(d) + jc_hi.row(d));
        out.j0.row(2 + d) = jc_hi.row(d) - jc_lo.row(d);
        out.j1.row(d) = 0.5 * (jo_lo.row(d) + jo_hi.row(d));
        out.j1.row(2 + d) = jo_hi.row(d) - jo_lo.row(d);
      }
      return out;
    }

    case FactorKind::ObjectPlane: {
      const Vertex& obj = vx[f.v0];
      const Vertex& pl = vx[f.v1];
      const Vec4 raw = double(f.plane_sign) * detail::raw_plane_coeffs(pl);
      const Vec3 n = raw.head<3>();
      const double rho = n.norm();
      const Vec3 h = 0.5 * obj.dims;
      double e = 0.0;
      Eigen::Matrix<double, 1, 9> j_obj = Eigen::Matrix<double, 1, 9>::Zero();
      Eigen::Matrix<double, 1, 4> j_raw = Eigen::Matrix<double, 1, 4>::Zero();
      for (int k = 0; k < 8; ++k) {
        const Vec3 l((k & 1) ? h.x() : -h.x(), (k & 2) ? h.y() : -h.y(),
                     (k & 4) ? h.z() : -h.z());
        const Vec3 pw = obj.pose.apply(l);
        const double v = (n.dot(pw) + raw[3]) / rho;
        if (v >= 0) continue;
        e -= v;
        if (want_jac) {
          j_obj -= (n.transpose() / rho) *
                   detail::corner_world_jacobian(obj.pose.rotation, l);
          j_raw.head<3>() -=
              pw.transpose() / rho - (n.dot(pw) + raw[3]) *
                                         n.transpose() / (rho * rho * rho);
          j_raw(0, 3) -= 1.0 / rho;
        }
      }
      out.residual = VecX::Constant(1, e);
      if (want_jac) {
        out.j0 = j_obj;
        out.j1 = double(f.plane_sign) * j_raw *
                 detail::raw_plane_param_jacobian(pl);
      }
      return out;
    }

    case FactorKind::PointPlane: {
      const Vertex& pt = vx[f.v0];
      const Vertex& pl = vx[f.v1];
      const Vec4 raw = detail::raw_plane_coeffs(pl);
      const Vec3 n = raw.head<3>();
      const double rho = n.norm();
      const double v = (n.dot(pt.point) + raw[3]) / rho;
      const double sigma = v < 0 ? -1.0 : 1.0;
      out.residual = VecX::Constant(1, sigma * v);
      if (want_jac) {
        out.j0 = sigma * n.transpose() / rho;
        Eigen::Matrix<double, 1, 4> j_raw;
        j_raw.head<3>() =
            pt.point.transpose() / rho -
            (n.dot(pt.point) + raw[3]) * n.transpose() / (rho * rho * rho);
        j_raw(0, 3) = 1.0 / rho;
        out.j1 = sigma * j_raw * detail::raw_plane_param_jacobian(pl);
      }
      return out;
    }

    case FactorKind::PosePrior: {
      const Vertex& cam = vx[f.v0];
      out.residual = VecX(6);
      out.residual.head<3>() = cam.pose.translation - f.meas_pose.translation;
      const Vec3 rw =
          so3_log(f.meas_pose.rotation.transpose() * cam.pose.rotation);
      out.residual.tail<3>() = rw;
      if (want_jac) {
        out.j0 = MatX::Zero(6, 6);
        out.j0.block<3, 3>(0, 0) = Mat3::Identity();
        out.j0.block<3, 3>(3, 3) = so3_right_jacobian_inv(rw);
      }
      return out;
    }

    case FactorKind::OdometryPrior: {
      const Vertex& ci = vx[f.v0];
      const Vertex& cj = vx[f.v1];
      const Mat3 rit = ci.pose.rotation.transpose();
      const Vec3 dt = rit * (cj.pose.translation - ci.pose.translation);
      const Vec3 rw = so3_log(f.meas_pose.rotation.transpose() *
                              (rit * cj.pose.rotation));
      out.residual = VecX(6);
      out.residual.head<3>() = dt - f.meas_pose.translation;
      out.residual.tail<3>() = rw;
      if (want_jac) {
        const Mat3 jr_inv = so3_right_jacobian_inv(rw);
        const Mat3 m = rit * cj.pose.rotation;  // R_i^T R_j
        out.j0 = MatX::Zero(6, 6);
        out.j0.block<3, 3>(0, 0) = -rit;
        out.j0.block<3, 3>(0, 3) = skew(dt);
        out.j0.block<3, 3>(3, 3) = -jr_inv * m.transpose();
        out.j1 = MatX::Zero(6, 6);
        out.j1.block<3, 3>(0, 0) = rit;
        out.j1.block<3, 3>(3, 3) = jr_inv;
      }
      return out;
    }
  }
  out.ok = false;
  return out;
}

}  // namespace opslam

#endif  // OPSLAM_ESTIMATION_FACTOR_HPP_
