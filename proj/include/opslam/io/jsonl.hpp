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
#ifndef OPSLAM_IO_JSONL_HPP_
#define OPSLAM_IO_JSONL_HPP_

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opslam/io/trajectory_io.hpp"
#include "opslam/sim/render.hpp"
#include "opslam/sim/scene.hpp"
#include "opslam/slam/frame.hpp"

namespace opslam {
namespace io {

using json = nlohmann::json;

inline json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
inline json vec3_json(const Vec3& v) {
  return json::array({v.x(), v.y(), v.z()});
}
inline json vec4_json(const Vec4& v) {
  return json::array({v[0], v[1], v[2], v[3]});
}

inline Vec2 json_vec2(const json& j) { return Vec2(j.at(0), j.at(1)); }
inline Vec3 json_vec3(const json& j) {
  return Vec3(j.at(0), j.at(1), j.at(2));
}
inline Vec4 json_vec4(const json& j) {
  return Vec4(j.at(0), j.at(1), j.at(2), j.at(3));
}

/// Row-major 9-element rotation + 3-element translation; exact double
/// round-trip (no quaternion renormalization on the wire).
inline json pose_json(const Pose& p) {
  json r = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.push_back(p.rotation(i, j));
  return json{{"rotation", r}, {"translation", vec3_json(p.translation)}};
}

inline Pose json_pose(const json& j) {
  const json& r = j.at("rotation");
  Mat3 R;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) R(i, k) = r.at(3 * i + k);
  return Pose(R, json_vec3(j.at("translation")));
}

inline json cuboid_json(const Cuboid& c) {
  return json{{"pose", pose_json(c.pose)}, {"dims", vec3_json(c.dims)}};
}

inline Cuboid json_cuboid(const json& j) {
  return Cuboid(json_pose(j.at("pose")), json_vec3(j.at("dims")));
}

inline json bbox_json(const BBox2D& b) {
  return json{{"center", vec2_json(b.center)}, {"size", vec2_json(b.size)}};
}

inline BBox2D json_bbox(const json& j) {
  BBox2D b;
  b.center = json_vec2(j.at("center"));
  b.size = json_vec2(j.at("size"));
  return b;
}

inline json edge_json(const GroundEdge2D& e) {
  return json{{"p0", vec2_json(e.p0)}, {"p1", vec2_json(e.p1)}};
}

inline GroundEdge2D json_edge(const json& j) {
  GroundEdge2D e;
  e.p0 = json_vec2(j.at("p0"));
  e.p1 = json_vec2(j.at("p1"));
  return e;
}

inline json intrinsics_json(const CameraIntrinsics& k) {
  return json{{"fx", k.fx},       {"fy", k.fy},
              {"cx", k.cx},       {"cy", k.cy},
              {"width", k.width}, {"height", k.height}};
}

inline CameraIntrinsics json_intrinsics(const json& j) {
  CameraIntrinsics k;
  k.fx = j.at("fx");
  k.fy = j.at("fy");
  k.cx = j.at("cx");
  k.cy = j.at("cy");
  k.width = j.at("width");
  k.height = j.at("height");
  return k;
}

inline json header_json(const SequenceHeader& h) {
  return json{{"type", "header"},
              {"intrinsics", intrinsics_json(h.intrinsics)},
              {"ground", vec4_json(h.world_ground.coeffs)},
              {"initial_pose", pose_json(h.initial_pose)}};
}

inline SequenceHeader json_header(const json& j) {
  SequenceHeader h;
  h.intrinsics = json_intrinsics(j.at("intrinsics"));
  h.world_ground = Plane(json_vec4(j.at("ground")));
  h.initial_pose = json_pose(j.at("initial_pose"));
  return h;
}

inline json frame_json(const FrameInput& f) {
  json points = json::array();
  for (const PointObservation& p : f.points) {
    points.push_back(json{{"pixel", vec2_json(p.pixel)},
                          {"track_id", p.track_id},
                          {"corrupted", p.corrupted}});
  }
  json dets = json::array();
  for (const ObjectDetection& d : f.detections) {
    dets.push_back(json{{"box", bbox_json(d.box)},
                        {"confidence", d.confidence},
                        {"instance", d.instance}});
  }
  json edges = json::array();
  for (const GroundEdge2D& e : f.edges) edges.push_back(edge_json(e));
  json planes = json::array();
  for (const PlaneProposalObs& p : f.plane_proposals) {
    planes.push_back(
        json{{"edge", edge_json(p.edge)}, {"contour_dist", p.contour_dist}});
  }
  json cubs = json::array();
  for (const CuboidProposalObs& c : f.cuboid_proposals) {
    cubs.push_back(json{{"cuboid_cam", cuboid_json(c.cuboid_cam)},
                        {"detection", c.detection},
                        {"fit_error", c.fit_error}});
  }
  return json{{"type", "frame"},
              {"frame_id", f.frame_id},
              {"timestamp", f.timestamp},
              {"gt_pose", pose_json(f.gt_pose)},
              {"odom", pose_json(f.odom)},
              {"points", points},
              {"detections", dets},
              {"edges", edges},
              {"plane_proposals", planes},
              {"cuboid_proposals", cubs}};
}

inline FrameInput json_frame(const json& j) {
  FrameInput f;
  f.frame_id = j.at("frame_id");
  f.timestamp = j.at("timestamp");
  f.gt_pose = json_pose(j.at("gt_pose"));
  f.odom = json_pose(j.at("odom"));
  for (const json& p : j.at("points")) {
    PointObservation o;
    o.pixel = json_vec2(p.at("pixel"));
    o.track_id = p.at("track_id");
    o.corrupted = p.at("corrupted");
    f.points.push_back(o);
  }
  for (const json& d : j.at("detections")) {
    ObjectDetection o;
    o.box = json_bbox(d.at("box"));
    o.confidence = d.at("confidence");
    o.instance = d.at("instance");
    f.detections.push_back(o);
  }
  for (const json& e : j.at("edges")) f.edges.push_back(json_edge(e));
  for (const json& p : j.at("plane_proposals")) {
    PlaneProposalObs o;
    o.edge = json_edge(p.at("edge"));
    o.contour_dist = p.at("contour_dist");
    f.plane_proposals.push_back(o);
  }
  for (const json& c : j.at("cuboid_proposals")) {
    CuboidProposalObs o;
    o.cuboid_cam = json_cuboid(c.at("cuboid_cam"));
    o.detection = c.at("detection");
    o.fit_error = c.at("fit_error");
    f.cuboid_proposals.push_back(o);
  }
  return f;
}

/// Writes a sequence as JSON lines: one header line, then one line per frame.
inline void write_observations(const std::string& path,
                               const RenderedSequence& seq) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << header_json(seq.header).dump() << '\n';
  for (const FrameInput& f : seq.frames) out << frame_json(f).dump() << '\n';
}

inline RenderedSequence read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  RenderedSequence seq;
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "header") {
      seq.header = json_header(j);
      have_header = true;
    } else if (type == "frame") {
      seq.frames.push_back(json_frame(j));
    } else {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": unknown record type '" + type + "'");
    }
  }
  if (!have_header) throw IoError(path + ": missing header record");
  return seq;
}

inline json wall_json(const Wall& w) {
  return json{{"plane", vec4_json(w.plane().coeffs)},
              {"base0", vec3_json(w.base0)},
              {"base1", vec3_json(w.base1)},
              {"height", w.height}};
}

/// Ground-truth scene export (walls, objects, points, ground).
inline json scene_json(const Scene& scene) {
  json walls = json::array();
  for (const Wall& w : scene.walls) walls.push_back(wall_json(w));
  json objects = json::array();
  for (const Cuboid& c : scene.objects) objects.push_back(cuboid_json(c));
  json points = json::array();
  for (size_t i = 0; i < scene.points.size(); ++i) {
    points.push_back(json{{"position", vec3_json(scene.points[i])},
                          {"surface", scene.point_surface[i]}});
  }
  return json{{"layout", scene.spec.layout == SceneSpec::Layout::Room
                             ? "room"
                             : "corridor"},
              {"width", scene.spec.width},
              {"length", scene.spec.length},
              {"height", scene.spec.height},
              {"ground", vec4_json(scene.ground.coeffs)},
              {"walls", walls},
              {"objects", objects},
              {"points", points}};
}

inline void write_scene(const std::string& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << scene_json(scene).dump(2) << '\n';
}

/// Reads back the object list of a scene export (the part eval consumes).
inline std::vector<Cuboid> read_scene_objects(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  std::vector<Cuboid> objects;
  for (const json& c : j.at("objects")) objects.push_back(json_cuboid(c));
  return objects;
}

}  // namespace io
}  // namespace opslam

#endif  // OPSLAM_IO_JSONL_HPP_
