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
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opslam/cli/commands.hpp"

namespace {

/// Parses `--seeds a..b` (inclusive) or a single number into a seed list.
std::vector<uint64_t> parse_seed_range(const std::string& s) {
  const size_t dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      return {std::stoull(s)};
    }
    const uint64_t a = std::stoull(s.substr(0, dots));
    const uint64_t b = std::stoull(s.substr(dots + 2));
    if (b < a) throw opslam::ConfigError("--seeds range end before start");
    if (b - a > 10000) throw opslam::ConfigError("--seeds range too large");
    std::vector<uint64_t> seeds;
    for (uint64_t v = a; v <= b; ++v) seeds.push_back(v);
    return seeds;
  } catch (const std::invalid_argument&) {
    throw opslam::ConfigError("malformed --seeds value `" + s + "`");
  } catch (const std::out_of_range&) {
    throw opslam::ConfigError("malformed --seeds value `" + s + "`");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"object and plane SLAM workbench"};
  app.require_subcommand(1);

  std::string config_path, obs_path, out_dir, mode = "full";
  std::string est_path, gt_path, map_path, scene_path, seeds_str;
  std::string report_mode = "basic";
  uint64_t seed = 0;
  int frame_id = -1, frames = -1;
  bool all_frames = false;

  CLI::App* sim = app.add_subcommand("simulate",
                                     "generate scene + observations");
  sim->add_option("--config", config_path, "scene/trajectory/noise config")
      ->required();
  sim->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* sim_seed = sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--frames", frames, "override trajectory frame count");

  CLI::App* det = app.add_subcommand("detect",
                                     "single-image proposal selection");
  det->add_option("--obs", obs_path, "observations.jsonl")->required();
  det->add_option("--out", out_dir, "output directory")->required();
  det->add_option("--config", config_path, "CRF weight config");
  det->add_option("--frame", frame_id, "frame id to process");
  det->add_flag("--all", all_frames, "process every frame");
  det->add_option("--seed", seed, "RNG seed (unused; selection is exact)");

  CLI::App* slam = app.add_subcommand("slam", "run the SLAM pipeline");
  slam->add_option("--obs", obs_path, "observations.jsonl");
  slam->add_option("--config", config_path, "pipeline / simulation config");
  slam->add_option("--out", out_dir, "output directory")->required();
  slam->add_option("--mode", mode,
                   "points | points+objects | points+objects+planes | "
                   "points+objects+planes+manhattan | full");
  CLI::Option* slam_seed = slam->add_option("--seed", seed, "RNG seed");
  slam->add_option("--seeds", seeds_str, "seed sweep a..b (needs --config)");
  slam->add_option("--scene", scene_path, "GT scene.json for object IoU");
  slam->add_option("--frames", frames, "limit processed frames");
  slam->add_option("--report", report_mode, "basic | full (adds timing)");

  CLI::App* eval = app.add_subcommand("eval", "trajectory / object metrics");
  eval->add_option("--est", est_path, "estimated trajectory");
  eval->add_option("--gt", gt_path, "ground-truth trajectory");
  eval->add_option("--map", map_path, "map_summary.txt");
  eval->add_option("--scene", scene_path, "GT scene.json");
  eval->add_option("--out", out_dir, "output directory (optional)");
  eval->add_option("--seed", seed, "RNG seed (unused; metrics are exact)");

  CLI::App* bench = app.add_subcommand("bench", "timing benchmarks");
  bench->add_option("--config", config_path, "benchmark scene config");
  bench->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* bench_seed = bench->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) {
      return opslam::cli::cmd_simulate(config_path, out_dir, seed,
                                       sim_seed->count() > 0, frames);
    }
    if (det->parsed()) {
      if (!all_frames && frame_id < 0) {
        throw opslam::ConfigError("detect needs --frame or --all");
      }
      return opslam::cli::cmd_detect(obs_path, out_dir, config_path,
                                     frame_id, all_frames);
    }
    if (slam->parsed()) {
      std::vector<uint64_t> seeds;
      if (!seeds_str.empty()) {
        seeds = parse_seed_range(seeds_str);
      } else {
        seeds = {slam_seed->count() > 0 ? seed : 0};
      }
      if (report_mode != "basic" && report_mode != "full") {
        throw opslam::ConfigError("--report must be basic or full");
      }
      return opslam::cli::cmd_slam(obs_path, config_path, out_dir, mode,
                                   seeds, scene_path, frames,
                                   report_mode == "full");
    }
    if (eval->parsed()) {
      return opslam::cli::cmd_eval(est_path, gt_path, map_path, scene_path,
                                   out_dir);
    }
    if (bench->parsed()) {
      return opslam::cli::cmd_bench(config_path, out_dir, seed,
                                    bench_seed->count() > 0);
    }
  } catch (const opslam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const opslam::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const opslam::TrackingLost& e) {
    std::cerr << "tracking lost: " << e.what() << "\n";
    return 3;
  } catch (const opslam::SingularSystem& e) {
    std::cerr << "singular system: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
