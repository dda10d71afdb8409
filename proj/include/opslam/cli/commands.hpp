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
#ifndef OPSLAM_CLI_COMMANDS_HPP_
#define OPSLAM_CLI_COMMANDS_HPP_

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "opslam/core/rng.hpp"
#include "opslam/crf/exact.hpp"
#include "opslam/crf/inference.hpp"
#include "opslam/io/config.hpp"
#include "opslam/io/jsonl.hpp"
#include "opslam/io/map_export.hpp"
#include "opslam/io/report.hpp"
#include "opslam/io/trajectory_io.hpp"
#include "opslam/sim/render.hpp"
#include "opslam/sim/trajectory.hpp"
#include "opslam/slam/lift.hpp"
#include "opslam/slam/pipeline.hpp"

namespace opslam {
namespace cli {

// ---------------------------------------------------------------------------
// Config loaders
// ---------------------------------------------------------------------------

inline SceneSpec load_scene_spec(const io::Config& cfg, uint64_t seed) {
  SceneSpec s;
  const std::string layout = cfg.get_string("scene.layout", "room");
  if (layout == "room") {
    s.layout = SceneSpec::Layout::Room;
  } else if (layout == "corridor") {
    s.layout = SceneSpec::Layout::Corridor;
  } else {
    throw ConfigError("scene.layout must be \"room\" or \"corridor\", got `" +
                      layout + "`");
  }
  s.width = cfg.get_number("scene.width", s.width);
  s.length = cfg.get_number("scene.length", s.length);
  s.height = cfg.get_number("scene.height", s.height);
  s.bend = cfg.get_number("scene.bend", s.bend);
  s.point_density = cfg.get_number("scene.point_density", s.point_density);
  s.seed = seed;
  const int groups = cfg.table_count("scene.objects");
  for (int i = 0; i < groups; ++i) {
    const std::string p = "scene.objects." + std::to_string(i) + ".";
    SceneSpec::ObjectSpec o;
    o.count = cfg.get_int(p + "count", o.count);
    auto vec3_key = [&](const std::string& key, const Vec3& fallback) {
      const std::vector<double> v = cfg.get_array(
          key, {fallback.x(), fallback.y(), fallback.z()});
      if (v.size() != 3)
        throw ConfigError("config key `" + key + "` must have 3 elements");
      return Vec3(v[0], v[1], v[2]);
    };
    o.dims_min = vec3_key(p + "dims_min", o.dims_min);
    o.dims_max = vec3_key(p + "dims_max", o.dims_max);
    s.objects.push_back(o);
  }
  return s;
}

inline TrajectorySpec load_trajectory_spec(const io::Config& cfg) {
  TrajectorySpec t;
  const std::string pattern = cfg.get_string("trajectory.pattern", "orbit");
  if (pattern == "orbit") {
    t.pattern = TrajectorySpec::Pattern::Orbit;
  } else if (pattern == "walk") {
    t.pattern = TrajectorySpec::Pattern::Walk;
  } else {
    throw ConfigError(
        "trajectory.pattern must be \"orbit\" or \"walk\", got `" + pattern +
        "`");
  }
  t.frames = cfg.get_int("trajectory.frames", t.frames);
  t.rate_hz = cfg.get_number("trajectory.rate_hz", t.rate_hz);
  t.camera_height = cfg.get_number("trajectory.camera_height",
                                   t.camera_height);
  t.pitch_deg = cfg.get_number("trajectory.pitch_deg", t.pitch_deg);
  t.radius = cfg.get_number("trajectory.radius", t.radius);
  t.angular_speed_deg = cfg.get_number("trajectory.angular_speed_deg",
                                       t.angular_speed_deg);
  t.speed = cfg.get_number("trajectory.speed", t.speed);
  t.sway = cfg.get_number("trajectory.sway", t.sway);
  if (t.frames < 1) throw ConfigError("trajectory.frames must be >= 1");
  if (t.rate_hz <= 0) throw ConfigError("trajectory.rate_hz must be > 0");
  return t;
}

inline CameraIntrinsics load_intrinsics(const io::Config& cfg) {
  CameraIntrinsics k;
  k.fx = cfg.get_number("camera.fx", k.fx);
  k.fy = cfg.get_number("camera.fy", k.fy);
  k.cx = cfg.get_number("camera.cx", k.cx);
  k.cy = cfg.get_number("camera.cy", k.cy);
  k.width = cfg.get_int("camera.width", k.width);
  k.height = cfg.get_int("camera.height", k.height);
  return k;
}

inline NoiseSpec load_noise_spec(const io::Config& cfg) {
  NoiseSpec n;
  n.pixel_sigma = cfg.get_number("noise.pixel_sigma", n.pixel_sigma);
  n.bbox_sigma = cfg.get_number("noise.bbox_sigma", n.bbox_sigma);
  n.edge_endpoint_sigma =
      cfg.get_number("noise.edge_endpoint_sigma", n.edge_endpoint_sigma);
  n.contour_jitter_sigma =
      cfg.get_number("noise.contour_jitter_sigma", n.contour_jitter_sigma);
  n.detection_dropout_prob = cfg.get_number("noise.detection_dropout_prob",
                                            n.detection_dropout_prob);
  n.outlier_detection_prob = cfg.get_number("noise.outlier_detection_prob",
                                            n.outlier_detection_prob);
  n.track_id_corruption_prob = cfg.get_number(
      "noise.track_id_corruption_prob", n.track_id_corruption_prob);
  n.spurious_edge_prob =
      cfg.get_number("noise.spurious_edge_prob", n.spurious_edge_prob);
  n.odom_trans_bias = cfg.get_number("noise.odom_trans_bias",
                                     n.odom_trans_bias);
  n.odom_rot_bias_deg = cfg.get_number("noise.odom_rot_bias_deg",
                                       n.odom_rot_bias_deg);
  n.odom_trans_sigma = cfg.get_number("noise.odom_trans_sigma",
                                      n.odom_trans_sigma);
  n.odom_rot_sigma_deg = cfg.get_number("noise.odom_rot_sigma_deg",
                                        n.odom_rot_sigma_deg);
  return n;
}

inline ProposalNoiseSpec load_proposal_spec(const io::Config& cfg) {
  ProposalNoiseSpec p;
  p.proposals_per_instance = cfg.get_int("proposals.per_instance",
                                         p.proposals_per_instance);
  p.trans_sigma = cfg.get_number("proposals.trans_sigma", p.trans_sigma);
  p.yaw_sigma_deg = cfg.get_number("proposals.yaw_sigma_deg",
                                   p.yaw_sigma_deg);
  p.dims_sigma = cfg.get_number("proposals.dims_sigma", p.dims_sigma);
  p.near_gt_prob = cfg.get_number("proposals.near_gt_prob", p.near_gt_prob);
  p.fit_alpha = cfg.get_number("proposals.fit_alpha", p.fit_alpha);
  p.fit_beta = cfg.get_number("proposals.fit_beta", p.fit_beta);
  if (p.proposals_per_instance < 1 || p.proposals_per_instance > 15)
    throw ConfigError("proposals.per_instance must be in [1, 15]");
  return p;
}

inline SlamMode parse_mode(const std::string& m) {
  if (m == "points") return SlamMode::Points;
  if (m == "points+objects") return SlamMode::PointsObjects;
  if (m == "points+objects+planes") return SlamMode::PointsObjectsPlanes;
  if (m == "points+objects+planes+manhattan" || m == "full")
    return SlamMode::Full;
  throw ConfigError(
      "unknown mode `" + m +
      "` (expected points, points+objects, points+objects+planes, "
      "points+objects+planes+manhattan, or full)");
}

inline CrfWeights load_crf_weights(const io::Config& cfg) {
  CrfWeights w;
  w.w_plane = cfg.get_number("crf.w_plane", w.w_plane);
  w.w_obj = cfg.get_number("crf.w_obj", w.w_obj);
  w.w_oo = cfg.get_number("crf.w_oo", w.w_oo);
  w.w_ol = cfg.get_number("crf.w_ol", w.w_ol);
  w.w_ll = cfg.get_number("crf.w_ll", w.w_ll);
  return w;
}

inline PipelineConfig load_pipeline_config(const io::Config& cfg,
                                           SlamMode mode) {
  PipelineConfig p;
  p.mode = mode;
  p.crf = load_crf_weights(cfg);
  p.window = cfg.get_int("slam.window", p.window);
  p.reproj_weight = cfg.get_number("slam.reproj_weight", p.reproj_weight);
  p.camera_plane_weight =
      cfg.get_number("slam.camera_plane_weight", p.camera_plane_weight);
  p.camera_object_weight =
      cfg.get_number("slam.camera_object_weight", p.camera_object_weight);
  p.point_plane_weight =
      cfg.get_number("slam.point_plane_weight", p.point_plane_weight);
  p.object_plane_weight =
      cfg.get_number("slam.object_plane_weight", p.object_plane_weight);
  p.odom_trans_weight =
      cfg.get_number("slam.odom_trans_weight", p.odom_trans_weight);
  p.odom_rot_weight = cfg.get_number("slam.odom_rot_weight",
                                     p.odom_rot_weight);
  p.min_matches = cfg.get_int("slam.min_matches", p.min_matches);
  p.match_gate_px = cfg.get_number("slam.match_gate_px", p.match_gate_px);
  p.wall_height = cfg.get_number("scene.height", p.wall_height);
  p.lifecycle.promote_min_obs =
      cfg.get_int("lifecycle.promote_min_obs", p.lifecycle.promote_min_obs);
  p.lifecycle.obs_window = cfg.get_int("lifecycle.obs_window",
                                       p.lifecycle.obs_window);
  p.lifecycle.min_support = cfg.get_int("lifecycle.min_support",
                                        p.lifecycle.min_support);
  p.lifecycle.cull_age = cfg.get_int("lifecycle.cull_age",
                                     p.lifecycle.cull_age);
  p.window_solver.max_iters = cfg.get_int("solver.max_iters",
                                          p.window_solver.max_iters);
  return p;
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

inline void ensure_out_dir(const std::string& out) {
  if (out.empty()) throw ConfigError("missing --out directory");
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out);
}

inline std::string out_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

/// In-memory product of one simulation.
struct Simulated {
  Scene scene;
  std::vector<Pose> poses;
  std::vector<double> stamps;
  RenderedSequence seq;
};

inline Simulated simulate_from_config(const io::Config& cfg, uint64_t seed,
                                      int frames_override) {
  Simulated sim;
  sim.scene = generate_scene(load_scene_spec(cfg, seed));
  TrajectorySpec tspec = load_trajectory_spec(cfg);
  if (frames_override > 0) tspec.frames = frames_override;
  sim.poses = generate_trajectory(sim.scene, tspec);
  sim.stamps = trajectory_timestamps(tspec);
  sim.seq = render_observations(sim.scene, sim.poses, sim.stamps,
                                load_intrinsics(cfg), load_noise_spec(cfg),
                                load_proposal_spec(cfg), seed);
  return sim;
}

inline std::vector<TimedPose> gt_trajectory_of(const RenderedSequence& seq) {
  std::vector<TimedPose> gt;
  gt.reserve(seq.frames.size());
  for (const FrameInput& f : seq.frames) {
    gt.push_back(TimedPose{f.timestamp, f.gt_pose});
  }
  return gt;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

inline int cmd_simulate(const std::string& config_path,
                        const std::string& out_dir, uint64_t seed,
                        bool seed_given, int frames_override) {
  const io::Config cfg = io::Config::parse_file(config_path);
  const uint64_t s = seed_given ? seed : uint64_t(cfg.get_int("seed", 0));
  const Simulated sim = simulate_from_config(cfg, s, frames_override);

  ensure_out_dir(out_dir);
  io::write_scene(out_path(out_dir, "scene.json"), sim.scene);
  io::write_observations(out_path(out_dir, "observations.jsonl"), sim.seq);
  std::vector<TimedPose> gt;
  for (size_t k = 0; k < sim.poses.size(); ++k) {
    gt.push_back(TimedPose{sim.stamps[k], sim.poses[k]});
  }
  write_trajectory(out_path(out_dir, "gt_trajectory.txt"), gt);

  std::cout << "simulate: seed " << s << ", " << sim.seq.frames.size()
            << " frames, " << sim.scene.walls.size() << " walls, "
            << sim.scene.objects.size() << " objects, "
            << sim.scene.points.size() << " points -> " << out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

inline int cmd_detect(const std::string& obs_path,
                      const std::string& out_dir,
                      const std::string& config_path, int frame_id,
                      bool all) {
  const RenderedSequence seq = io::read_observations(obs_path);
  CrfWeights weights;
  if (!config_path.empty()) {
    weights = load_crf_weights(io::Config::parse_file(config_path));
  }
  if (!all && (frame_id < 0 || frame_id >= int(seq.frames.size()))) {
    throw ConfigError("frame id out of range (sequence has " +
                      std::to_string(seq.frames.size()) + " frames)");
  }
  ensure_out_dir(out_dir);
  std::ofstream out(out_path(out_dir, "detections.jsonl"));
  if (!out) throw IoError("cannot write detections.jsonl");

  const int first = all ? 0 : frame_id;
  const int last = all ? int(seq.frames.size()) - 1 : frame_id;
  for (int f = first; f <= last; ++f) {
    const FrameInput& frame = seq.frames[f];
    std::vector<LiftedPlane> planes;
    std::vector<CuboidProposal> cuboids;
    lift_frame_proposals(seq.header.intrinsics, seq.header.world_ground,
                         frame.gt_pose, frame, true, true, &planes, &cuboids);
    io::json rec{{"frame", frame.frame_id},
                 {"num_vars", int(planes.size() + cuboids.size())}};
    if (planes.empty() && cuboids.empty()) {
      rec["energy"] = 0.0;
      rec["selected_planes"] = io::json::array();
      rec["selected_cuboids"] = io::json::array();
    } else {
      std::vector<PlaneProposal> props;
      props.reserve(planes.size());
      for (const LiftedPlane& lp : planes) props.push_back(lp.prop);
      const CrfModel model = build_crf(props, cuboids, frame.gt_pose,
                                       weights);
      const BpState bp = run_lbp(model);
      const std::vector<int> x = map_select(model, bp);
      rec["energy"] = energy_of(model, x);
      rec["lbp_iterations"] = bp.iteration;
      rec["lbp_converged"] = bp.converged;
      io::json sel_planes = io::json::array();
      io::json sel_cuboids = io::json::array();
      for (int i = 0; i < model.num_vars(); ++i) {
        if (!x[i]) continue;
        if (model.vars[i].kind == CrfModel::VarKind::Plane) {
          sel_planes.push_back(model.vars[i].proposal_index);
        } else {
          sel_cuboids.push_back(
              io::json{{"proposal", model.vars[i].proposal_index},
                       {"detection", model.vars[i].instance_id}});
        }
      }
      rec["selected_planes"] = sel_planes;
      rec["selected_cuboids"] = sel_cuboids;
      if (model.num_vars() <= 20) {
        const ExactMapResult exact = exact_map(model);
        rec["exact_energy"] = exact.energy;
      }
    }
    out << rec.dump() << '\n';
    std::cout << "frame " << frame.frame_id << ": vars " << rec["num_vars"]
              << " energy " << rec["energy"].get<double>();
    if (rec.contains("exact_energy")) {
      std::cout << " exact " << rec["exact_energy"].get<double>();
    }
    std::cout << " planes " << rec["selected_planes"].size() << " objects "
              << rec["selected_cuboids"].size() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// slam
// ---------------------------------------------------------------------------

/// Trajectory plus report of one completed run.
struct SlamRun {
  std::vector<TimedPose> trajectory;
  io::RunReport report;
};

/// Builds the trajectory and report from a pipeline that has processed
/// every frame of `seq`.
inline SlamRun finish_run(const Pipeline& pipe, const RenderedSequence& seq,
                          const PipelineConfig& pcfg,
                          const std::string& config_hash, uint64_t seed,
                          const std::vector<Cuboid>* gt_objects,
                          bool with_timing) {
  SlamRun run;
  run.trajectory = pipe.trajectory();

  io::RunReport& r = run.report;
  r.config_hash = config_hash;
  r.seed = seed;
  r.mode = to_string(pcfg.mode);
  r.frames = int(seq.frames.size());
  const std::vector<TimedPose> gt = gt_trajectory_of(seq);
  r.ate = evaluate_ate(run.trajectory, gt);
  r.per_frame_errors.reserve(gt.size());
  for (size_t i = 0; i < gt.size(); ++i) {
    r.per_frame_errors.push_back(
        (run.trajectory[i].pose.translation - gt[i].pose.translation)
            .norm());
  }
  if (gt_objects != nullptr && mode_has_objects(pcfg.mode)) {
    r.mean_object_iou = evaluate_iou(pipe.stable_objects(), *gt_objects);
  }

  double esum = 0.0, emin = 0.0, emax = 0.0;
  double track_ms = 0.0, crf_ms = 0.0, ba_ms = 0.0;
  for (const FrameDiagnostics& d : pipe.diagnostics()) {
    if (d.selected_objects + d.selected_planes > 0) {
      if (r.crf_frames == 0) {
        emin = emax = d.crf_energy;
      } else {
        emin = std::min(emin, d.crf_energy);
        emax = std::max(emax, d.crf_energy);
      }
      esum += d.crf_energy;
      ++r.crf_frames;
    }
    track_ms += d.tracking_ms;
    crf_ms += d.crf_ms;
    ba_ms += d.ba_ms;
  }
  if (r.crf_frames > 0) {
    r.crf_energy_mean = esum / r.crf_frames;
    r.crf_energy_min = emin;
    r.crf_energy_max = emax;
  }

  const SlamMap& map = pipe.map();
  auto total = [&](LandmarkType t) {
    return map.count(t, LandmarkState::Candidate) +
           map.count(t, LandmarkState::Stable) +
           map.count(t, LandmarkState::Culled);
  };
  r.counters["points_total"] = total(LandmarkType::Point);
  r.counters["points_stable"] =
      map.count(LandmarkType::Point, LandmarkState::Stable);
  r.counters["objects_total"] = total(LandmarkType::Object);
  r.counters["objects_stable"] =
      map.count(LandmarkType::Object, LandmarkState::Stable);
  r.counters["planes_total"] =
      total(LandmarkType::PlaneFree) + total(LandmarkType::PlaneManhattan);
  r.counters["planes_stable"] =
      map.count(LandmarkType::PlaneFree, LandmarkState::Stable) +
      map.count(LandmarkType::PlaneManhattan, LandmarkState::Stable);
  r.counters["culled"] =
      map.count(LandmarkType::Point, LandmarkState::Culled) +
      map.count(LandmarkType::Object, LandmarkState::Culled) +
      map.count(LandmarkType::PlaneFree, LandmarkState::Culled) +
      map.count(LandmarkType::PlaneManhattan, LandmarkState::Culled);
  r.counters["landmarks"] = int(map.landmarks.size());

  if (with_timing && !seq.frames.empty()) {
    r.with_timing = true;
    r.tracking_ms_mean = track_ms / double(seq.frames.size());
    r.crf_ms_mean = crf_ms / double(seq.frames.size());
    r.ba_ms_mean = ba_ms / double(seq.frames.size());
  }
  return run;
}

inline void write_run_outputs(const std::string& dir, const Pipeline& pipe,
                              const SlamRun& run, double wall_height) {
  write_trajectory(out_path(dir, "trajectory.txt"), run.trajectory);
  io::write_map_summary(out_path(dir, "map_summary.txt"), pipe.map());
  io::write_map_ply(out_path(dir, "map.ply"), pipe.map(), wall_height);
  io::write_report(out_path(dir, "report.json"), run.report);
}

inline int cmd_slam(const std::string& obs_path,
                    const std::string& config_path,
                    const std::string& out_dir, const std::string& mode_str,
                    const std::vector<uint64_t>& seeds,
                    const std::string& scene_path, int frames_override,
                    bool timing_report) {
  const io::Config cfg = config_path.empty()
                             ? io::Config()
                             : io::Config::parse_file(config_path);
  const SlamMode mode = parse_mode(mode_str);
  const PipelineConfig pcfg = load_pipeline_config(cfg, mode);
  const std::string hash = cfg.hash();
  ensure_out_dir(out_dir);

  if (!obs_path.empty()) {
    if (seeds.size() > 1) {
      throw ConfigError(
          "--seeds sweep requires --config simulation (observations file "
          "fixes the noise realization)");
    }
    RenderedSequence seq = io::read_observations(obs_path);
    if (frames_override > 0 &&
        frames_override < int(seq.frames.size())) {
      seq.frames.resize(frames_override);
    }
    std::vector<Cuboid> gt_objects;
    const bool have_scene = !scene_path.empty();
    if (have_scene) gt_objects = io::read_scene_objects(scene_path);

    Pipeline pipe(seq.header, pcfg);
    for (const FrameInput& f : seq.frames) pipe.process_frame(f);
    const SlamRun run = finish_run(pipe, seq, pcfg, hash,
                                   seeds.empty() ? 0 : seeds[0],
                                   have_scene ? &gt_objects : nullptr,
                                   timing_report);
    write_run_outputs(out_dir, pipe, run, pcfg.wall_height);
    std::cout << "slam: mode " << to_string(mode) << ", "
              << seq.frames.size() << " frames, ATE rmse "
              << run.report.ate.rmse << " m -> " << out_dir << "\n";
    return 0;
  }

  if (config_path.empty()) {
    throw ConfigError("slam requires --obs or a --config with a scene");
  }
  // Seed sweep: one simulation + run per seed.
  io::json runs = io::json::array();
  std::vector<double> ates;
  int failed = 0;
  for (uint64_t s : seeds) {
    const Simulated sim = simulate_from_config(cfg, s, frames_override);
    io::json rec{{"seed", s}};
    try {
      Pipeline pipe(sim.seq.header, pcfg);
      for (const FrameInput& f : sim.seq.frames) pipe.process_frame(f);
      const SlamRun run = finish_run(pipe, sim.seq, pcfg, hash, s,
                                     &sim.scene.objects, timing_report);
      const std::string seed_dir =
          out_path(out_dir, "seed_" + std::to_string(s));
      ensure_out_dir(seed_dir);
      write_run_outputs(seed_dir, pipe, run, pcfg.wall_height);
      rec["ok"] = true;
      rec["ate_rmse"] = run.report.ate.rmse;
      rec["mean_iou"] = run.report.mean_object_iou;
      ates.push_back(run.report.ate.rmse);
    } catch (const TrackingLost& e) {
      rec["ok"] = false;
      rec["error"] = std::string("tracking_lost: ") + e.what();
      ++failed;
    } catch (const SingularSystem& e) {
      rec["ok"] = false;
      rec["error"] = std::string("singular_system: ") + e.what();
      ++failed;
    }
    runs.push_back(rec);
  }
  io::json sweep{{"mode", to_string(mode)},
                 {"config_hash", hash},
                 {"runs", runs},
                 {"ok_runs", int(seeds.size()) - failed},
                 {"failed_runs", failed}};
  if (!ates.empty()) {
    std::vector<double> sorted = ates;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    sweep["ate_rmse_median"] = n % 2 ? sorted[n / 2]
                                     : 0.5 * (sorted[n / 2 - 1] +
                                              sorted[n / 2]);
  }
  std::ofstream sw(out_path(out_dir, "sweep.json"));
  if (!sw) throw IoError("cannot write sweep.json");
  sw << sweep.dump(2) << '\n';
  std::cout << "slam sweep: mode " << to_string(mode) << ", "
            << seeds.size() << " seeds, " << failed << " failed -> "
            << out_dir << "\n";
  return failed > 0 ? 3 : 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

inline int cmd_eval(const std::string& est_path, const std::string& gt_path,
                    const std::string& map_path,
                    const std::string& scene_path,
                    const std::string& out_dir) {
  io::json result;
  if (!est_path.empty() || !gt_path.empty()) {
    if (est_path.empty() || gt_path.empty()) {
      throw ConfigError("trajectory eval needs both --est and --gt");
    }
    const std::vector<TimedPose> est = read_trajectory(est_path);
    const std::vector<TimedPose> gt = read_trajectory(gt_path);
    AteResult ate;
    try {
      ate = evaluate_ate(est, gt);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    result["ate"] = {{"rmse", ate.rmse}, {"mean", ate.mean},
                     {"max", ate.max}};
  }
  if (!map_path.empty() || !scene_path.empty()) {
    if (map_path.empty() || scene_path.empty()) {
      throw ConfigError("object eval needs both --map and --scene");
    }
    const std::vector<io::SummaryObject> est_objs =
        io::read_map_summary_objects(map_path);
    std::vector<Cuboid> stable;
    for (const io::SummaryObject& o : est_objs) {
      if (o.state == "stable") stable.push_back(o.cuboid);
    }
    const std::vector<Cuboid> gt_objs = io::read_scene_objects(scene_path);
    result["mean_iou"] = evaluate_iou(stable, gt_objs);
    result["est_objects"] = int(stable.size());
    result["gt_objects"] = int(gt_objs.size());
  }
  if (result.empty()) {
    throw ConfigError("eval needs --est/--gt and/or --map/--scene");
  }
  if (!out_dir.empty()) {
    ensure_out_dir(out_dir);
    std::ofstream out(out_path(out_dir, "eval.json"));
    if (!out) throw IoError("cannot write eval.json");
    out << result.dump(2) << '\n';
  }
  std::cout << result.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

/// Per-call microseconds of the sparse clique update at clique size n.
inline double time_clique_sparse_us(int n, int reps, Rng* rng) {
  std::vector<MsgPair> in(n);
  for (auto& m : in) m = {rng->uniform(-1.0, 1.0), rng->uniform(-1.0, 1.0)};
  volatile double sink = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) {
    const std::vector<MsgPair> out = clique_messages(in);
    sink = sink + out[0][0];
  }
  return 1000.0 * ms_since(t0) / reps;
}

inline double time_clique_naive_us(int n, int reps, Rng* rng) {
  std::vector<MsgPair> in(n);
  for (auto& m : in) m = {rng->uniform(-1.0, 1.0), rng->uniform(-1.0, 1.0)};
  volatile double sink = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) {
    const std::vector<MsgPair> out = clique_messages_bruteforce(in);
    sink = sink + out[0][0];
  }
  return 1000.0 * ms_since(t0) / reps;
}

}  // namespace detail

/// Default benchmark scene when the config does not override it: a room
/// with five objects and a short orbit under mild noise.
inline io::Config bench_default_config() {
  return io::Config::parse_string(R"(
seed = 7
[scene]
layout = "room"
width = 6.0
length = 8.0
height = 2.5
point_density = 3.0
[[scene.objects]]
count = 5
[trajectory]
pattern = "orbit"
frames = 60
radius = 1.4
[noise]
pixel_sigma = 0.5
bbox_sigma = 2.0
edge_endpoint_sigma = 1.0
contour_jitter_sigma = 1.0
odom_trans_sigma = 0.002
)",
                                  "<bench-default>");
}

inline int cmd_bench(const std::string& config_path,
                     const std::string& out_dir, uint64_t seed,
                     bool seed_given) {
  const io::Config cfg = config_path.empty()
                             ? bench_default_config()
                             : io::Config::parse_file(config_path);
  const uint64_t s = seed_given ? seed : uint64_t(cfg.get_int("seed", 0));
  ensure_out_dir(out_dir);

  // Clique-message scaling: sparse across decades vs brute-force cutoff.
  Rng rng(s);
  io::json sparse = io::json::array();
  std::cout << "clique message scaling\n";
  std::cout << "  n        sparse_us\n";
  for (int n : {10, 100, 1000, 10000}) {
    const int reps = std::max(10, 2000000 / n);
    const double us = detail::time_clique_sparse_us(n, reps, &rng);
    sparse.push_back(io::json{{"n", n}, {"us", us}});
    std::printf("  %-8d %.3f\n", n, us);
  }
  const double naive20_us = detail::time_clique_naive_us(20, 5, &rng);
  std::printf("  naive n=20: %.3f us\n", naive20_us);

  // Bundle adjustment timing columns on the standard scene.
  const Simulated sim = simulate_from_config(cfg, s, -1);
  struct Column {
    const char* name;
    SlamMode mode;
    double tracking_ms = 0.0;
    double ba_ms = 0.0;
  };
  std::vector<Column> cols = {
      {"points", SlamMode::Points, 0, 0},
      {"points+objects", SlamMode::PointsObjects, 0, 0},
      {"points+objects+planes", SlamMode::PointsObjectsPlanes, 0, 0},
  };
  for (Column& c : cols) {
    PipelineConfig pcfg = load_pipeline_config(cfg, c.mode);
    Pipeline pipe(sim.seq.header, pcfg);
    for (const FrameInput& f : sim.seq.frames) pipe.process_frame(f);
    double track = 0.0, ba = 0.0;
    for (const FrameDiagnostics& d : pipe.diagnostics()) {
      track += d.tracking_ms;
      ba += d.ba_ms;
    }
    const double n = double(sim.seq.frames.size());
    c.tracking_ms = track / n;
    c.ba_ms = ba / n;
  }
  std::cout << "bundle adjustment timing (ms/frame, "
            << sim.seq.frames.size() << " frames, "
            << sim.scene.objects.size() << " objects)\n";
  std::printf("  %-24s %-12s %-14s %-14s\n", "tracking_ms", "ba_points_ms",
              "ba_objects_ms", "ba_planes_ms");
  std::printf("  %-24.3f %-12.3f %-14.3f %-14.3f\n", cols[0].tracking_ms,
              cols[0].ba_ms, cols[1].ba_ms, cols[2].ba_ms);

  io::json bench{
      {"clique_messages", {{"sparse", sparse}, {"naive_n20_us", naive20_us}}},
      {"ba",
       {{"tracking_ms", cols[0].tracking_ms},
        {"ba_points_ms", cols[0].ba_ms},
        {"ba_objects_ms", cols[1].ba_ms},
        {"ba_objects_planes_ms", cols[2].ba_ms},
        {"frames", int(sim.seq.frames.size())},
        {"objects", int(sim.scene.objects.size())}}}};
  std::ofstream out(out_path(out_dir, "bench.json"));
  if (!out) throw IoError("cannot write bench.json");
  out << bench.dump(2) << '\n';
  return 0;
}

}  // namespace cli
}  // namespace opslam

#endif  // OPSLAM_CLI_COMMANDS_HPP_
