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
#include <gtest/gtest.h>

#include <cmath>

#include "opslam/core/rng.hpp"
#include "opslam/geometry/angle_interval.hpp"
#include "opslam/geometry/camera.hpp"
#include "opslam/geometry/cuboid.hpp"
#include "opslam/geometry/intersection.hpp"
#include "opslam/geometry/plane.hpp"
#include "opslam/geometry/polygon.hpp"
#include "opslam/geometry/polyhedron.hpp"
#include "opslam/geometry/pose.hpp"
#include "opslam/geometry/raycast.hpp"
#include "opslam/geometry/so3.hpp"
#include "test_util.hpp"

namespace opslam {
namespace {

constexpr double kDeg = kPi / 180.0;

TEST(So3, ExpLogRoundTrip) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 w = 3.0 * Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1),
                              rng.uniform(-1, 1));
    if (w.norm() >= kPi) continue;
    const Mat3 R = so3_exp(w);
    EXPECT_LT((R * R.transpose() - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
    EXPECT_LT((so3_log(R) - w).norm(), 1e-9);
  }
  EXPECT_LT(so3_log(Mat3::Identity()).norm(), 1e-15);
}

TEST(So3, SkewMatchesCrossProduct) {
  const Vec3 a(0.3, -1.2, 2.0), b(-0.7, 0.4, 1.1);
  EXPECT_LT((skew(a) * b - a.cross(b)).norm(), 1e-15);
  EXPECT_LT((skew(a) + skew(a).transpose()).norm(), 1e-15);
}

TEST(So3, OrthonormalizeProjectsBack) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Mat3 R = so3_exp(rng.gauss3(0.6));
    Mat3 noisy = R;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) noisy(r, c) += 1e-8 * rng.uniform(-1, 1);
    const Mat3 Q = orthonormalize(noisy);
    EXPECT_LT((Q * Q.transpose() - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(Q.determinant(), 1.0, 1e-12);
    EXPECT_LT((Q - R).norm(), 1e-6);
  }
}

TEST(So3, YawRotationRoundTrip) {
  for (double yaw : {-2.5, -0.3, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(yaw_of(yaw_rotation(yaw)), wrap_angle(yaw), 1e-12);
  }
  const Mat3 R = yaw_rotation(0.5);
  EXPECT_LT((R * Vec3::UnitZ() - Vec3::UnitZ()).norm(), 1e-15);
}

TEST(Pose, ComposeInverseApply) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Pose a = testutil::random_pose(&rng);
    const Pose b = testutil::random_pose(&rng);
    const Vec3 p = rng.gauss3(1.0);
    EXPECT_LT(((a * b).apply(p) - a.apply(b.apply(p))).norm(), 1e-12);
    EXPECT_LT((a.apply_inverse(a.apply(p)) - p).norm(), 1e-12);
    const Pose id = a * a.inverse();
    EXPECT_LT((id.rotation - Mat3::Identity()).norm(), 1e-12);
    EXPECT_LT(id.translation.norm(), 1e-12);
    const Pose rel = a.relative_to(b);
    EXPECT_LT(((a * rel).rotation - b.rotation).norm(), 1e-12);
    EXPECT_LT(((a * rel).translation - b.translation).norm(), 1e-12);
  }
}

TEST(Pose, RetractStaysOnManifold) {
  const Pose p(so3_exp(Vec3(0.4, -0.2, 1.1)), Vec3(1, 2, 3));
  const Pose q = p.retract(Vec3(0.1, 0, -0.1), Vec3(0.05, 0.02, -0.03));
  EXPECT_LT((q.rotation * q.rotation.transpose() - Mat3::Identity()).norm(),
            1e-12);
  EXPECT_LT((q.translation - Vec3(1.1, 2, 2.9)).norm(), 1e-15);
  const Pose r = p.retract(Vec3::Zero(), Vec3::Zero());
  EXPECT_LT((r.rotation - p.rotation).norm(), 1e-12);
}

TEST(Camera, ProjectUnprojectRoundTrip) {
  const CameraIntrinsics K;
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Vec2 px(rng.uniform(0, 639), rng.uniform(0, 479));
    const double depth = rng.uniform(0.5, 6.0);
    const Vec3 pc = depth * K.unproject(px);
    EXPECT_LT((K.project(pc) - px).norm(), 1e-9);
  }
  EXPECT_TRUE(K.in_image(Vec2(0, 0)));
  EXPECT_TRUE(K.in_image(Vec2(639, 479)));
  EXPECT_FALSE(K.in_image(Vec2(-1, 10)));
  EXPECT_FALSE(K.in_image(Vec2(10, 10), 20.0));
}

TEST(Camera, ProjectJacobianMatchesFiniteDifference) {
  const CameraIntrinsics K;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vec3 pc(rng.uniform(-1, 1), rng.uniform(-1, 1),
                  rng.uniform(1.0, 5.0));
    const auto J = K.project_jacobian(pc);
    const double h = 1e-7;
    for (int k = 0; k < 3; ++k) {
      Vec3 hi = pc, lo = pc;
      hi[k] += h;
      lo[k] -= h;
      const Vec2 fd = (K.project(hi) - K.project(lo)) / (2 * h);
      EXPECT_LT((fd - J.col(k)).norm(), 1e-4);
    }
  }
}

TEST(Camera, BBoxIouAndContains) {
  const BBox2D a = BBox2D::from_min_max(Vec2(0, 0), Vec2(10, 10));
  const BBox2D b = BBox2D::from_min_max(Vec2(5, 0), Vec2(15, 10));
  EXPECT_NEAR(a.iou(b), 50.0 / 150.0, 1e-12);
  EXPECT_NEAR(a.iou(a), 1.0, 1e-12);
  const BBox2D c = BBox2D::from_min_max(Vec2(20, 20), Vec2(30, 30));
  EXPECT_EQ(a.iou(c), 0.0);
  EXPECT_TRUE(a.contains(Vec2(5, 5)));
  EXPECT_FALSE(a.contains(Vec2(11, 5)));
}

TEST(Polygon, AreaAndClip) {
  const Polygon2 sq = {Vec2(0, 0), Vec2(2, 0), Vec2(2, 2), Vec2(0, 2)};
  EXPECT_NEAR(polygon_area(sq), 4.0, 1e-12);
  // Keep x <= 1: half of the square.
  const Polygon2 half = clip_halfplane(sq, Vec2(1, 0), -1.0);
  EXPECT_NEAR(polygon_area(half), 2.0, 1e-12);
  // Clip everything away.
  EXPECT_NEAR(polygon_area(clip_halfplane(sq, Vec2(1, 0), -5.0)), 0.0, 1e-12);
}

TEST(Polygon, ConvexIntersect) {
  const Polygon2 a = {Vec2(0, 0), Vec2(2, 0), Vec2(2, 2), Vec2(0, 2)};
  const Polygon2 b = {Vec2(1, 1), Vec2(3, 1), Vec2(3, 3), Vec2(1, 3)};
  EXPECT_NEAR(polygon_area(convex_intersect(a, b)), 1.0, 1e-12);
  EXPECT_NEAR(polygon_area(convex_intersect(a, a)), 4.0, 1e-12);
  const Polygon2 far = {Vec2(10, 10), Vec2(11, 10), Vec2(11, 11), Vec2(10, 11)};
  EXPECT_NEAR(polygon_area(convex_intersect(a, far)), 0.0, 1e-12);
}

TEST(Polygon, PointInPolygonAndBoundaryDistance) {
  const Polygon2 sq = {Vec2(0, 0), Vec2(2, 0), Vec2(2, 2), Vec2(0, 2)};
  EXPECT_TRUE(point_in_polygon(sq, Vec2(1, 1)));
  EXPECT_FALSE(point_in_polygon(sq, Vec2(3, 1)));
  EXPECT_NEAR(polygon_boundary_distance(sq, Vec2(1, 1)), 1.0, 1e-12);
  EXPECT_NEAR(polygon_boundary_distance(sq, Vec2(0.25, 1)), 0.25, 1e-12);
  EXPECT_NEAR(polygon_boundary_distance(sq, Vec2(3, 1)), 1.0, 1e-12);
}

TEST(Polyhedron, CuboidVolumeAndFaceArea) {
  const Cuboid c(Pose(yaw_rotation(0.3), Vec3(1, -2, 0.5)), Vec3(2, 3, 0.5));
  const Polyhedron p = cuboid_to_polyhedron(c);
  EXPECT_EQ(p.faces.size(), 6u);
  EXPECT_NEAR(polyhedron_volume(p), 3.0, 1e-9);
  double total_area = 0;
  for (const auto& f : p.faces) total_area += face_area(f);
  EXPECT_NEAR(total_area, 2 * (2 * 3 + 2 * 0.5 + 3 * 0.5), 1e-9);
}

TEST(Polyhedron, ClipHalfKeepsHalfVolume) {
  const Cuboid c(Pose(), Vec3(2, 2, 2));
  // Keep x <= 0.
  const Polyhedron half =
      clip_polyhedron(cuboid_to_polyhedron(c), Vec3(1, 0, 0), 0.0);
  EXPECT_NEAR(polyhedron_volume(half), 4.0, 1e-9);
  // Keep everything / nothing.
  EXPECT_NEAR(polyhedron_volume(
                  clip_polyhedron(cuboid_to_polyhedron(c), Vec3(1, 0, 0),
                                  10.0)),
              8.0, 1e-9);
  EXPECT_NEAR(polyhedron_volume(
                  clip_polyhedron(cuboid_to_polyhedron(c), Vec3(1, 0, 0),
                                  -10.0)),
              0.0, 1e-9);
}

TEST(Plane, CanonicalFormIsIdempotent) {
  const Plane p(Vec4(0, 0, -2, 4));
  EXPECT_NEAR(p.coeffs.norm(), 1.0, 1e-15);
  EXPECT_GT(p.coeffs[2], 0);  // first significant coefficient positive
  const Plane q(p.coeffs);
  EXPECT_LT((q.coeffs - p.coeffs).norm(), 1e-15);
  const Plane r(Vec4(-1, 0.5, 0, 2));
  EXPECT_GT(r.coeffs[0], 0);
  EXPECT_NEAR(r.signed_distance(Vec3(2, 0, 0)), 0, 1e-12);
}

TEST(Plane, SignedDistanceAndThroughPoint) {
  const Plane p = Plane::through_point(Vec3(0, 0, 3), Vec3(1, 1, 2));
  EXPECT_NEAR(p.signed_distance(Vec3(0, 0, 5)), 3.0, 1e-12);
  EXPECT_NEAR(p.signed_distance(Vec3(7, -2, 2)), 0.0, 1e-12);
  EXPECT_NEAR(p.evaluate(Vec3(0, 0, 3)), 1.0, 1e-12);
}

TEST(Plane, TransformPlaneIdentity) {
  const Plane p(Vec4(0.2, -0.5, 1.0, 0.7));
  const Plane q = transform_plane(Pose(), p);
  EXPECT_LT((q.coeffs - p.coeffs).norm(), 1e-12);
}

TEST(Plane, TransformPlaneTranslationAlongNormal) {
  // Ground z=0, camera raised to height h: points get z_cam = z_world - h,
  // so the camera-frame plane is z + h = 0.
  const Plane ground(Vec4(0, 0, 1, 0));
  const Pose cam(Mat3::Identity(), Vec3(0, 0, 1.5));
  const Plane g_cam = transform_plane(cam, ground);
  EXPECT_LT((g_cam.coeffs - Vec4(0, 0, 1, 1.5).normalized()).norm(), 1e-12);
}

TEST(Plane, TransformPlanePreservesOnPlanePoints) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane world = testutil::random_plane(&rng);
    const Pose cam = testutil::random_pose(&rng);
    const Plane local = transform_plane(cam, world);
    // Basis of the world plane.
    const Vec3 n = world.normal();
    const Vec3 p0 = -world.offset() * n;
    const Vec3 e1 = n.unitOrthogonal();
    const Vec3 e2 = n.cross(e1);
    for (int i = 0; i < 50; ++i) {
      const Vec3 pw =
          p0 + rng.uniform(-3, 3) * e1 + rng.uniform(-3, 3) * e2;
      ASSERT_NEAR(world.evaluate(pw), 0.0, 1e-12);
      EXPECT_NEAR(local.evaluate(cam.apply_inverse(pw)), 0.0, 1e-10);
    }
  }
}

TEST(Plane, LogErrorZeroForEqualAndAntipodal) {
  const Plane pa(Vec4(0.3, -0.2, 0.9, 1.4));
  EXPECT_LT(plane_log_error(pa, pa).norm(), 1e-14);
  Plane pb;
  pb.coeffs = -pa.coeffs;  // bypass canonicalization
  EXPECT_LT(plane_log_error(pa, pb).norm(), 1e-9);
}

TEST(Plane, LogErrorScalesLinearlyNearZero) {
  const Plane pa(Vec4(0.1, 0.2, 1.0, 0.5));
  const Vec3 n = pa.normal();
  const Vec3 e1 = n.unitOrthogonal();
  double prev = -1;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    Vec4 raw = pa.coeffs;
    raw.head<3>() += eps * e1;
    const double err = plane_log_error(pa, Plane(raw)).norm();
    EXPECT_GT(err, 0.1 * eps);
    EXPECT_LT(err, 10 * eps);
    if (prev > 0) EXPECT_NEAR(prev / err, 10.0, 0.5);
    prev = err;
  }
}

TEST(Plane, NormalAngleIgnoresSign) {
  EXPECT_NEAR(plane_normal_angle(Vec3(1, 0, 0), Vec3(-1, 0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(plane_normal_angle(Vec3(1, 0, 0), Vec3(0, 2, 0)), kPi / 2,
              1e-12);
}

TEST(Plane, ManhattanSnapRespectsAngleGate) {
  // 29 degrees off the +x axis: accepted at a 30 degree gate.
  const Vec3 n29 = so3_exp(Vec3(0, 0, 29 * kDeg)) * Vec3::UnitX();
  bool ok = false;
  ManhattanPlane mp =
      ManhattanPlane::from_plane(Plane(n29, -2.0), 30 * kDeg, &ok);
  EXPECT_TRUE(ok);
  EXPECT_EQ(mp.axis, ManhattanPlane::Axis::X);
  EXPECT_EQ(mp.sign, 1);
  // 31 degrees: rejected.
  const Vec3 n31 = so3_exp(Vec3(0, 0, 31 * kDeg)) * Vec3::UnitX();
  ManhattanPlane::from_plane(Plane(n31, -2.0), 30 * kDeg, &ok);
  EXPECT_FALSE(ok);
  // Plane(0,-1,0,3) canonicalizes to (0,1,0,-3); the snap follows the
  // canonical normal.
  ManhattanPlane mn =
      ManhattanPlane::from_plane(Plane(Vec3(0, -1, 0), 3.0), 1e-6, &ok);
  EXPECT_TRUE(ok);
  EXPECT_EQ(mn.axis, ManhattanPlane::Axis::Y);
  EXPECT_EQ(mn.sign, 1);
  EXPECT_NEAR(mn.dist, -3.0, 1e-12);
  EXPECT_LT((mn.to_plane().coeffs - Vec4(0, 1, 0, -3).normalized()).norm(),
            1e-12);
}

TEST(AngleIntervals, OverlapExamples) {
  const AngleInterval a(0.0, 40 * kDeg);
  const AngleInterval b(20 * kDeg, 40 * kDeg);
  EXPECT_NEAR(angle_overlap_extent(a, b), 20 * kDeg, 1e-12);
  EXPECT_NEAR(angle_overlap_ratio(a, b), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(angle_overlap_ratio(a, a), 1.0, 1e-12);
  const AngleInterval c(90 * kDeg, 10 * kDeg);
  EXPECT_EQ(angle_overlap_ratio(a, c), 0.0);
  EXPECT_EQ(angle_overlap_ratio(AngleInterval(0, 0), AngleInterval(1, 0)),
            0.0);
}

TEST(AngleIntervals, WrapAroundOverlap) {
  // [350, 10) and [0, 20) overlap on [0, 10).
  const AngleInterval a(350 * kDeg, 20 * kDeg);
  const AngleInterval b(0.0, 20 * kDeg);
  EXPECT_NEAR(angle_overlap_extent(a, b), 10 * kDeg, 1e-12);
  EXPECT_NEAR(angle_overlap_ratio(a, b), 10.0 / 30.0, 1e-12);
}

TEST(AngleIntervals, FromSegmentEndpoints) {
  const Vec3 cam(0, 0, 1.2);
  const Vec3 p0(2, 0, 0);
  const Vec3 p1(2 * std::cos(40 * kDeg), 2 * std::sin(40 * kDeg), 0);
  const AngleInterval arc = angle_interval(p0, p1, cam);
  EXPECT_NEAR(arc.extent, 40 * kDeg, 1e-12);
  EXPECT_NEAR(arc.start, 0.0, 1e-12);
  // Order of endpoints must not matter.
  const AngleInterval rev = angle_interval(p1, p0, cam);
  EXPECT_NEAR(rev.start, arc.start, 1e-12);
  EXPECT_NEAR(rev.extent, arc.extent, 1e-12);
  EXPECT_THROW(angle_interval(p0, p0, cam), DegenerateEdge);
  EXPECT_THROW(angle_interval(Vec3(0, 0, 0), p1, Vec3(0, 0, 5)),
               DegenerateEdge);
}

TEST(Cuboids, CornersMatchClosedForm) {
  const Cuboid unit2(Pose(), Vec3(2, 2, 2));
  const auto v = unit2.corners();
  for (int i = 0; i < 8; ++i) {
    const Vec3 expect((i & 1) ? 1 : -1, (i & 2) ? 1 : -1, (i & 4) ? 1 : -1);
    EXPECT_LT((v[i] - expect).norm(), 1e-15) << "corner " << i;
  }
  const Cuboid moved(Pose(Mat3::Identity(), Vec3(1, 2, 3)), Vec3(2, 2, 2));
  const auto mv = moved.corners();
  for (int i = 0; i < 8; ++i) {
    EXPECT_LT((mv[i] - (v[i] + Vec3(1, 2, 3))).norm(), 1e-15);
  }
}

TEST(Cuboids, YawSwapsExtentsAndCentroidIsCenter) {
  const Cuboid c(Pose(yaw_rotation(kPi / 2), Vec3::Zero()), Vec3(4, 2, 1));
  Vec3 lo(1e30, 1e30, 1e30), hi = -lo;
  Vec3 centroid = Vec3::Zero();
  for (const auto& v : c.corners()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
    centroid += v / 8.0;
  }
  // 90 degree yaw swaps the x and y extents.
  EXPECT_NEAR(hi.x() - lo.x(), 2.0, 1e-12);
  EXPECT_NEAR(hi.y() - lo.y(), 4.0, 1e-12);
  EXPECT_NEAR(hi.z() - lo.z(), 1.0, 1e-12);
  EXPECT_LT(centroid.norm(), 1e-12);
}

TEST(Cuboids, UprightAndSnapToYaw) {
  const Cuboid flat(Pose(yaw_rotation(0.8), Vec3(1, 1, 0.5)), Vec3(1, 1, 1));
  EXPECT_TRUE(flat.is_upright());
  EXPECT_NEAR(flat.yaw(), 0.8, 1e-12);
  const Cuboid tilted(Pose(so3_exp(Vec3(0.2, 0, 0.8)), Vec3(1, 1, 0.5)),
                      Vec3(1, 1, 1));
  EXPECT_FALSE(tilted.is_upright());
  EXPECT_GT(tilted.tilt(), 0.1);
  const Cuboid snapped = tilted.snapped_to_yaw();
  EXPECT_TRUE(snapped.is_upright());
  EXPECT_LT((snapped.pose.translation - tilted.pose.translation).norm(),
            1e-12);
}

TEST(Cuboids, FootprintAndHeightRange) {
  const Cuboid c(Pose(yaw_rotation(0.3), Vec3(1, 2, 1.0)), Vec3(2, 1, 3));
  const auto fp = c.footprint();
  const Polygon2 poly(fp.begin(), fp.end());
  EXPECT_NEAR(polygon_area(poly), 2.0, 1e-12);
  double z0, z1;
  c.height_range(&z0, &z1);
  EXPECT_NEAR(z0, -0.5, 1e-12);
  EXPECT_NEAR(z1, 2.5, 1e-12);
}

TEST(Cuboids, ProjectedBBoxCenteredCube) {
  const CameraIntrinsics K;
  // Camera at origin looking down +z (camera frame == world frame).
  const Pose cam;
  const Cuboid cube(Pose(Mat3::Identity(), Vec3(0, 0, 5)), Vec3(1, 1, 1));
  const BBox2D box = project_cuboid_bbox(K, cam, cube);
  EXPECT_NEAR(box.center.x(), K.cx, 1e-9);
  EXPECT_NEAR(box.center.y(), K.cy, 1e-9);
  // Near face at z = 4.5 bounds the box: half-size = fx * 0.5 / 4.5.
  EXPECT_NEAR(box.size.x(), 2 * K.fx * 0.5 / 4.5, 1e-9);
  CameraIntrinsics K2 = K;
  K2.fx *= 2;
  K2.fy *= 2;
  const BBox2D box2 = project_cuboid_bbox(K2, cam, cube);
  EXPECT_NEAR(box2.size.x(), 2 * box.size.x(), 1e-9);
  EXPECT_NEAR(box2.size.y(), 2 * box.size.y(), 1e-9);
  EXPECT_NEAR(box2.center.x(), K.cx, 1e-9);
}

TEST(Cuboids, ProjectedBBoxMatchesSampledHull) {
  const CameraIntrinsics K;
  Rng rng(7);
  // Camera at origin looking along +y, z up: +z_cam = +y_world.
  Mat3 R;
  R.col(0) = Vec3::UnitX();
  R.col(1) = -Vec3::UnitZ();
  R.col(2) = Vec3::UnitY();
  const Pose cam(R, Vec3::Zero());
  for (int trial = 0; trial < 30; ++trial) {
    Cuboid c = testutil::random_upright_cuboid(&rng);
    c.pose.translation += Vec3(0, 8, 0);  // well in front of the camera
    const BBox2D box = project_cuboid_bbox(K, cam, c);
    // Oracle: project many convex combinations of the corners; all must be
    // inside the box and the extremes must reach its edges.
    const auto corners = c.corners();
    Vec2 lo(1e30, 1e30), hi(-1e30, -1e30);
    for (int s = 0; s < 4000; ++s) {
      double w[8];
      double tot = 0;
      for (int k = 0; k < 8; ++k) {
        w[k] = s < 8 ? (k == s ? 1.0 : 0.0) : std::pow(rng.uniform(), 4);
        tot += w[k];
      }
      Vec3 p = Vec3::Zero();
      for (int k = 0; k < 8; ++k) p += (w[k] / tot) * corners[k];
      const Vec2 px = K.project(cam.apply_inverse(p));
      lo = lo.cwiseMin(px);
      hi = hi.cwiseMax(px);
      EXPECT_GE(px.x(), box.min_corner().x() - 1e-9);
      EXPECT_LE(px.x(), box.max_corner().x() + 1e-9);
      EXPECT_GE(px.y(), box.min_corner().y() - 1e-9);
      EXPECT_LE(px.y(), box.max_corner().y() + 1e-9);
    }
    EXPECT_LT((lo - box.min_corner()).norm(), 1e-9);
    EXPECT_LT((hi - box.max_corner()).norm(), 1e-9);
  }
}

TEST(Cuboids, ProjectedBBoxThrowsBehindCamera) {
  const CameraIntrinsics K;
  const Cuboid behind(Pose(Mat3::Identity(), Vec3(0, 0, -5)), Vec3(1, 1, 1));
  EXPECT_THROW(project_cuboid_bbox(K, Pose(), behind), BehindCamera);
  // A box straddling the camera plane also throws.
  const Cuboid straddle(Pose(Mat3::Identity(), Vec3(0, 0, 0.2)),
                        Vec3(1, 1, 1));
  EXPECT_THROW(project_cuboid_bbox(K, Pose(), straddle), BehindCamera);
}

TEST(Intersections, IouIdentityDisjointAndOffset) {
  const Cuboid a(Pose(yaw_rotation(0.4), Vec3(1, 2, 0.5)), Vec3(1.5, 1, 1));
  EXPECT_NEAR(cuboid_iou_3d(a, a), 1.0, 1e-12);
  const Cuboid far(Pose(Mat3::Identity(), Vec3(10, 0, 0.5)), Vec3(1, 1, 1));
  EXPECT_EQ(cuboid_iou_3d(a, far), 0.0);
  // Unit cubes offset by 0.5 in x: intersection 0.5, union 1.5.
  const Cuboid u0(Pose(Mat3::Identity(), Vec3(0, 0, 0.5)), Vec3(1, 1, 1));
  const Cuboid u1(Pose(Mat3::Identity(), Vec3(0.5, 0, 0.5)), Vec3(1, 1, 1));
  EXPECT_NEAR(cuboid_iou_3d(u0, u1), 1.0 / 3.0, 1e-12);
}

TEST(Intersections, IouSymmetricAndThrowsOnTilt) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const Cuboid a = testutil::random_upright_cuboid(&rng, 1.5);
    const Cuboid b = testutil::random_upright_cuboid(&rng, 1.5);
    EXPECT_NEAR(cuboid_iou_3d(a, b), cuboid_iou_3d(b, a), 1e-12);
  }
  const Cuboid tilted(Pose(so3_exp(Vec3(0.3, 0, 0)), Vec3::Zero()),
                      Vec3(1, 1, 1));
  const Cuboid up(Pose(), Vec3(1, 1, 1));
  EXPECT_THROW(cuboid_iou_3d(tilted, up), NotUpright);
  EXPECT_THROW(cuboid_iou_3d(up, tilted), NotUpright);
}

TEST(Intersections, IouMatchesVoxelOracle) {
  Rng rng(9);
  int nontrivial = 0;
  for (int i = 0; i < 50; ++i) {
    Cuboid a = testutil::random_upright_cuboid(&rng, 1.0);
    Cuboid b = testutil::random_upright_cuboid(&rng, 1.0);
    b.pose.translation =
        a.pose.translation + 0.3 * (b.pose.translation - a.pose.translation);
    const double exact = cuboid_iou_3d(a, b);
    const double voxel = testutil::voxel_iou(a, b);
    EXPECT_NEAR(exact, voxel, 0.01) << "pair " << i;
    if (exact > 0.05) ++nontrivial;
  }
  EXPECT_GT(nontrivial, 10);
}

TEST(Intersections, OccludedRatioExamples) {
  const Cuboid c(Pose(Mat3::Identity(), Vec3(0, 0, 0.5)), Vec3(1, 1, 1));
  // Plane x = 2 oriented so the cuboid is fully on the positive side.
  EXPECT_NEAR(occluded_volume_ratio(c, Plane(Vec3(-1, 0, 0), 2.0)), 0.0,
              1e-12);
  // Same plane oriented the other way: fully occluded.
  EXPECT_NEAR(
      occluded_volume_ratio(
          c, oriented_toward(Plane(Vec3(-1, 0, 0), 2.0), Vec3(5, 0, 0))),
      1.0, 1e-12);
  // Plane through the center: half occluded either way.
  const Plane mid(Vec3(1, 0, 0), 0.0);
  EXPECT_NEAR(occluded_volume_ratio(c, mid), 0.5, 1e-9);
}

TEST(Intersections, OccludedRatioMirrorSumsToOne) {
  Rng rng(10);
  for (int i = 0; i < 40; ++i) {
    const Cuboid c = testutil::random_upright_cuboid(&rng);
    Plane p = testutil::random_plane(&rng);
    Plane flipped;
    flipped.coeffs = -p.coeffs;
    const double a = occluded_volume_ratio(c, p);
    const double b = occluded_volume_ratio(c, flipped);
    EXPECT_NEAR(a + b, 1.0, 1e-9) << "trial " << i;
  }
}

TEST(Intersections, OccludedRatioMatchesVoxelOracle) {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    const Cuboid c = testutil::random_upright_cuboid(&rng, 1.0);
    // Plane near the cuboid so the cut is usually nontrivial.
    Plane p = testutil::random_plane(&rng);
    p = Plane::through_point(
        p.normal(),
        c.pose.translation + Vec3(0.2 * (i % 5) - 0.4, 0.1, 0));
    EXPECT_NEAR(occluded_volume_ratio(c, p),
                testutil::voxel_occluded_ratio(c, p), 0.01)
        << "trial " << i;
  }
}

TEST(Intersections, OrientedTowardFlipsSign) {
  const Plane p(Vec3(1, 0, 0), 0.0);  // x = 0
  const Plane toward_pos = oriented_toward(p, Vec3(3, 0, 0));
  EXPECT_GT(toward_pos.evaluate(Vec3(3, 0, 0)), 0);
  const Plane toward_neg = oriented_toward(p, Vec3(-3, 0, 0));
  EXPECT_GT(toward_neg.evaluate(Vec3(-3, 0, 0)), 0);
  EXPECT_LT((toward_pos.coeffs + toward_neg.coeffs).norm(), 1e-15);
}

TEST(Raycasts, BackprojectRoundTrip) {
  const CameraIntrinsics K;
  Rng rng(12);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Pose cam(so3_exp(Vec3(0.3 * rng.uniform(), 0.3 * rng.uniform(),
                                rng.uniform())),
                   Vec3(rng.uniform(), rng.uniform(), 1.0 + rng.uniform()));
    const Plane ground_cam = transform_plane(cam, Plane(Vec4(0, 0, 1, 0)));
    const Vec2 px(rng.uniform(0, 639), rng.uniform(0, 479));
    Vec3 p;
    try {
      p = backproject_to_ground(K, px, ground_cam);
    } catch (const DegenerateRay&) {
      continue;
    }
    EXPECT_NEAR(ground_cam.evaluate(p), 0.0, 1e-9);
    EXPECT_LT((K.project(p) - px).norm(), 1e-8);
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(Raycasts, BackprojectThrowsOnParallelOrBehind) {
  const CameraIntrinsics K;
  // Plane parallel to the viewing ray through the principal point.
  const Plane parallel(Vec3(1, 0, 0), 5.0);
  EXPECT_THROW(backproject_to_ground(K, Vec2(K.cx, K.cy), parallel),
               DegenerateRay);
  // Plane behind the camera.
  const Plane behind(Vec3(0, 0, 1), 2.0);  // z = -2
  EXPECT_THROW(backproject_to_ground(K, Vec2(K.cx, K.cy), behind),
               DegenerateRay);
}

TEST(Raycasts, PerpendicularWallDepth) {
  const CameraIntrinsics K;
  // Camera at origin looking along world +x (z up): wall x = 3 faces it.
  Mat3 R;
  R.col(0) = -Vec3::UnitY();  // +x_cam
  R.col(1) = -Vec3::UnitZ();  // +y_cam (down)
  R.col(2) = Vec3::UnitX();   // +z_cam (forward)
  const Pose cam(R, Vec3::Zero());
  const Plane wall(Vec3(1, 0, 0), -3.0);
  EXPECT_NEAR(ray_structure_depth(K, cam, Vec2(K.cx, K.cy), wall), 3.0,
              1e-12);
  // Ray parallel to the wall.
  const Plane side(Vec3(0, 0, 1), 0.0);
  EXPECT_THROW(ray_structure_depth(K, cam, Vec2(K.cx, K.cy), side),
               NoIntersection);
  // Behind / out of the depth window.
  const Plane behind(Vec3(1, 0, 0), 3.0);  // x = -3
  EXPECT_THROW(ray_structure_depth(K, cam, Vec2(K.cx, K.cy), behind),
               NoIntersection);
  const Plane too_far(Vec3(1, 0, 0), -80.0);
  EXPECT_THROW(ray_structure_depth(K, cam, Vec2(K.cx, K.cy), too_far),
               NoIntersection);
  const Plane too_near(Vec3(1, 0, 0), -0.05);
  EXPECT_THROW(ray_structure_depth(K, cam, Vec2(K.cx, K.cy), too_near),
               NoIntersection);
}

TEST(Raycasts, CuboidDepthMatchesMarchOracle) {
  const CameraIntrinsics K;
  Rng rng(13);
  Mat3 R;
  R.col(0) = Vec3::UnitX();
  R.col(1) = -Vec3::UnitZ();
  R.col(2) = Vec3::UnitY();  // looking along +y
  const Pose cam(R, Vec3(0, 0, 1.0));
  int hits = 0;
  for (int i = 0; i < 150; ++i) {
    Cuboid c = testutil::random_upright_cuboid(&rng, 2.0);
    c.pose.translation += Vec3(0, 6, 0);
    const Vec2 px(rng.uniform(0, 639), rng.uniform(0, 479));
    const Vec3 dir = cam.rotation * K.unproject(px);
    double depth;
    try {
      depth = ray_structure_depth(K, cam, px, c);
    } catch (const NoIntersection&) {
      // Oracle: no sampled point along the ray may be strictly inside.
      for (double t = kMinStructureDepth; t < 20.0; t += 0.01) {
        EXPECT_FALSE(
            testutil::cuboid_contains(c, cam.translation + t * dir, -1e-6))
            << "missed hit at t=" << t << " trial " << i;
      }
      continue;
    }
    ++hits;
    const Vec3 hit = cam.translation + depth * dir;
    // The hit point is on the boundary.
    EXPECT_TRUE(testutil::cuboid_contains(c, hit, 1e-6));
    EXPECT_FALSE(testutil::cuboid_contains(c, hit, -1e-6));
    // Nothing earlier on the ray is inside.
    for (double t = kMinStructureDepth; t < depth - 1e-3; t += 0.005) {
      EXPECT_FALSE(
          testutil::cuboid_contains(c, cam.translation + t * dir, -1e-9));
    }
    // Depth equals the camera-frame forward coordinate of the hit.
    EXPECT_NEAR(cam.apply_inverse(hit).z(), depth, 1e-9);
  }
  EXPECT_GT(hits, 15);
}

TEST(Raycasts, ObservedWallPlaneRecoversWall) {
  const CameraIntrinsics K;
  // Camera 1.2m above ground looking along +y.
  Mat3 R;
  R.col(0) = Vec3::UnitX();
  R.col(1) = -Vec3::UnitZ();
  R.col(2) = Vec3::UnitY();
  const Pose cam(R, Vec3(0.3, -0.5, 1.2));
  const Plane ground(Vec4(0, 0, 1, 0));
  const Plane wall_world(Vec3(0, 1, 0), -4.0);  // wall y = 4
  // Two points on the wall-ground line, projected into the image.
  const Vec3 g0(-1.0, 4.0, 0.0), g1(1.5, 4.0, 0.0);
  GroundEdge2D edge;
  edge.p0 = K.project(cam.apply_inverse(g0));
  edge.p1 = K.project(cam.apply_inverse(g1));
  ASSERT_TRUE(K.in_image(edge.p0));
  ASSERT_TRUE(K.in_image(edge.p1));
  const Plane wall_cam = observed_wall_plane(K, cam, edge, ground);
  // The recovered camera-frame plane must agree with the transformed truth.
  const Plane expect = transform_plane(cam, wall_world);
  EXPECT_LT(plane_log_error(expect, wall_cam).norm(), 1e-9);
  EXPECT_NEAR(wall_cam.evaluate(cam.apply_inverse(g0)), 0.0, 1e-9);
  EXPECT_NEAR(wall_cam.evaluate(cam.apply_inverse(g1 + Vec3(0, 0, 2.0))), 0.0,
              1e-9);
  // Degenerate edge: coincident pixels.
  GroundEdge2D bad;
  bad.p0 = bad.p1 = edge.p0;
  EXPECT_THROW(observed_wall_plane(K, cam, bad, ground), DegenerateEdge);
}

TEST(Types, WrapAngle) {
  EXPECT_NEAR(wrap_angle(0.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(wrap_angle(3 * kPi)), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(kPi / 4 + 2 * kPi), kPi / 4, 1e-12);
  EXPECT_NEAR(wrap_angle(-kPi / 4 - 2 * kPi), -kPi / 4, 1e-12);
}

}  // namespace
}  // namespace opslam
