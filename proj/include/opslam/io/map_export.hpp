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
#ifndef OPSLAM_IO_MAP_EXPORT_HPP_
#define OPSLAM_IO_MAP_EXPORT_HPP_

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "opslam/geometry/so3.hpp"
#include "opslam/io/trajectory_io.hpp"
#include "opslam/slam/map.hpp"

namespace opslam {
namespace io {

namespace detail {

struct PlyColor {
  int r = 200, g = 200, b = 200;
};

inline PlyColor landmark_color(const MapLandmark& lm) {
  const bool stable = lm.state == LandmarkState::Stable;
  switch (lm.type) {
    case LandmarkType::Point:
      return stable ? PlyColor{230, 230, 230} : PlyColor{120, 120, 120};
    case LandmarkType::Object:
      return stable ? PlyColor{40, 200, 40} : PlyColor{200, 200, 40};
    case LandmarkType::PlaneFree:
      return stable ? PlyColor{60, 120, 230} : PlyColor{120, 160, 230};
    case LandmarkType::PlaneManhattan:
      return stable ? PlyColor{40, 200, 220} : PlyColor{140, 220, 230};
  }
  return PlyColor{};
}

inline std::string ply_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

/// ASCII PLY of all alive landmarks: points as colored vertices, plane
/// extents as colored quad faces, cuboids as colored wireframe edges.
inline void write_map_ply(const std::string& path, const SlamMap& map,
                          double wall_height = 2.5) {
  std::vector<std::string> vertices;
  std::vector<std::string> faces;
  std::vector<std::string> edges;
  auto add_vertex = [&](const Vec3& p, detail::PlyColor c) {
    int idx = int(vertices.size());
    vertices.push_back(detail::ply_num(p.x()) + " " + detail::ply_num(p.y()) +
                       " " + detail::ply_num(p.z()) + " " +
                       std::to_string(c.r) + " " + std::to_string(c.g) + " " +
                       std::to_string(c.b));
    return idx;
  };

  static const int kBoxEdges[12][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3},
                                       {4, 5}, {4, 6}, {5, 7}, {6, 7},
                                       {0, 4}, {1, 5}, {2, 6}, {3, 7}};

  for (const MapLandmark& lm : map.landmarks) {
    if (!lm.alive()) continue;
    const detail::PlyColor c = detail::landmark_color(lm);
    switch (lm.type) {
      case LandmarkType::Point:
        add_vertex(lm.point, c);
        break;
      case LandmarkType::Object: {
        const std::array<Vec3, 8> corners = lm.cuboid.corners();
        int base[8];
        for (int i = 0; i < 8; ++i) base[i] = add_vertex(corners[i], c);
        for (const auto& e : kBoxEdges) {
          edges.push_back(std::to_string(base[e[0]]) + " " +
                          std::to_string(base[e[1]]) + " " +
                          std::to_string(c.r) + " " + std::to_string(c.g) +
                          " " + std::to_string(c.b));
        }
        break;
      }
      case LandmarkType::PlaneFree:
      case LandmarkType::PlaneManhattan: {
        const Vec3 up = wall_height * Vec3::UnitZ();
        const int v0 = add_vertex(lm.base0, c);
        const int v1 = add_vertex(lm.base1, c);
        const int v2 = add_vertex(lm.base1 + up, c);
        const int v3 = add_vertex(lm.base0 + up, c);
        faces.push_back("4 " + std::to_string(v0) + " " + std::to_string(v1) +
                        " " + std::to_string(v2) + " " + std::to_string(v3));
        break;
      }
    }
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << vertices.size() << '\n';
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "element face " << faces.size() << '\n';
  out << "property list uchar int vertex_indices\n";
  out << "element edge " << edges.size() << '\n';
  out << "property int vertex1\nproperty int vertex2\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  for (const std::string& v : vertices) out << v << '\n';
  for (const std::string& f : faces) out << f << '\n';
  for (const std::string& e : edges) out << e << '\n';
}

/// Structured-text listing of every landmark: id, type, state, parameters.
inline void write_map_summary(const std::string& path, const SlamMap& map) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  auto num = detail::ply_num;
  out << "# opslam map summary\n";
  out << "frames " << map.frames.size() << '\n';
  out << "landmarks " << map.landmarks.size() << '\n';
  for (const MapLandmark& lm : map.landmarks) {
    out << "landmark " << lm.id << " type " << to_string(lm.type) << " state "
        << to_string(lm.state) << " created " << lm.created_frame << " obs "
        << lm.observing_frames.size();
    switch (lm.type) {
      case LandmarkType::Point:
        out << " position " << num(lm.point.x()) << ' ' << num(lm.point.y())
            << ' ' << num(lm.point.z());
        break;
      case LandmarkType::Object:
        out << " center " << num(lm.cuboid.pose.translation.x()) << ' '
            << num(lm.cuboid.pose.translation.y()) << ' '
            << num(lm.cuboid.pose.translation.z()) << " dims "
            << num(lm.cuboid.dims.x()) << ' ' << num(lm.cuboid.dims.y())
            << ' ' << num(lm.cuboid.dims.z()) << " yaw "
            << num(lm.cuboid.yaw()) << " support "
            << lm.supporting_points.size();
        break;
      case LandmarkType::PlaneFree:
      case LandmarkType::PlaneManhattan: {
        const Vec4 cf = lm.plane_estimate().coeffs;
        out << " coeffs " << num(cf[0]) << ' ' << num(cf[1]) << ' '
            << num(cf[2]) << ' ' << num(cf[3]) << " extent "
            << num(lm.base0.x()) << ' ' << num(lm.base0.y()) << ' '
            << num(lm.base1.x()) << ' ' << num(lm.base1.y()) << " support "
            << lm.supporting_points.size();
        break;
      }
    }
    out << '\n';
  }
}

/// One object row of a map summary, as read back by eval.
struct SummaryObject {
  int id = -1;
  std::string state;
  Cuboid cuboid;
};

/// Parses the object landmarks out of a map summary file.
inline std::vector<SummaryObject> read_map_summary_objects(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<SummaryObject> objects;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok != "landmark") continue;
    SummaryObject o;
    Vec3 center = Vec3::Zero(), dims = Vec3::Ones();
    double yaw = 0.0;
    std::string type;
    ss >> o.id;
    std::string key;
    while (ss >> key) {
      if (key == "type") {
        ss >> type;
      } else if (key == "state") {
        ss >> o.state;
      } else if (key == "center") {
        ss >> center.x() >> center.y() >> center.z();
      } else if (key == "dims") {
        ss >> dims.x() >> dims.y() >> dims.z();
      } else if (key == "yaw") {
        ss >> yaw;
      } else if (key == "created" || key == "obs" || key == "support") {
        ss >> tok;
      } else if (key == "position" || key == "coeffs" || key == "extent") {
        break;  // point/plane payload; not an object row
      }
    }
    if (type != "object") continue;
    if (!ss && !ss.eof()) throw IoError(path + ": malformed summary line");
    o.cuboid = Cuboid(Pose(yaw_rotation(yaw), center), dims);
    objects.push_back(o);
  }
  return objects;
}

}  // namespace io
}  // namespace opslam

#endif  // OPSLAM_IO_MAP_EXPORT_HPP_
