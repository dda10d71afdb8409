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
#ifndef OPSLAM_CRF_MODEL_HPP_
#define OPSLAM_CRF_MODEL_HPP_

#include <map>
#include <vector>

#include "opslam/crf/proposals.hpp"
#include "opslam/geometry/angle_interval.hpp"
#include "opslam/geometry/intersection.hpp"

namespace opslam {

constexpr double kBigEnergy = 1e9;

struct CrfWeights {
  double w_plane = 1.0;
  double w_obj = 1.0;
  double w_oo = 2.0;
  double w_ol = 2.0;
  double w_ll = 2.0;
};

/// Binary selection CRF over proposals. Variable i selected = 1.
/// Energy(x) = sum_i unary1[i] x_i + sum_(i,j) w_ij x_i x_j
///           + sum_cliques (0 if at most one member selected, BIG otherwise).
struct CrfModel {
  enum class VarKind { Plane, Object };

  struct Var {
    VarKind kind;
    int proposal_index;  // into the source plane/object proposal list
    int instance_id;     // -1 for planes
    double unary1;       // energy of x=1; energy of x=0 is 0
  };

  struct PairwiseTerm {
    int i, j;  // i < j
    double energy;
  };

  std::vector<Var> vars;
  std::vector<PairwiseTerm> pairwise;
  std::vector<std::vector<int>> cliques;

  int num_vars() const { return int(vars.size()); }
};

/// Assembles unary, pairwise, and at-most-one clique terms from proposals
/// expressed in a common upright world frame.
inline CrfModel build_crf(const std::vector<PlaneProposal>& planes,
                          const std::vector<CuboidProposal>& objects,
                          const Pose& cam_pose, const CrfWeights& w) {
  CrfModel m;
  m.vars.reserve(planes.size() + objects.size());
  const Vec3 cam = cam_pose.translation;

  std::vector<AngleInterval> intervals(planes.size());
  std::vector<Plane> walls(planes.size());
  for (int i = 0; i < int(planes.size()); ++i) {
    const PlaneProposal& p = planes[i];
    m.vars.push_back({CrfModel::VarKind::Plane, i, -1,
                      -w.w_plane * p.fov_angle * (1.0 - p.contour_dist)});
    intervals[i] = angle_interval(p.edge3d[0], p.edge3d[1], cam);
    walls[i] = oriented_toward(proposal_wall_plane(p), cam);
  }
  for (int i = 0; i < int(objects.size()); ++i) {
    const CuboidProposal& o = objects[i];
    m.vars.push_back({CrfModel::VarKind::Object, i, o.instance_id,
                      -w.w_obj * (1.0 - o.fit_error)});
  }
  const int np = int(planes.size());

  // Plane-plane: angle overlap ratio, hard penalty past 5 degrees overlap.
  for (int i = 0; i < np; ++i) {
    for (int j = i + 1; j < np; ++j) {
      const double extent =
          angle_overlap_extent(intervals[i], intervals[j]);
      if (extent > deg2rad(5.0)) {
        m.pairwise.push_back({i, j, kBigEnergy});
      } else {
        const double ratio =
            angle_overlap_ratio(intervals[i], intervals[j]);
        if (ratio > 0) m.pairwise.push_back({i, j, w.w_ll * ratio});
      }
    }
  }
  // Object-object: 3D IoU, skipping pairs of the same instance.
  for (int i = 0; i < int(objects.size()); ++i) {
    for (int j = i + 1; j < int(objects.size()); ++j) {
      if (objects[i].instance_id == objects[j].instance_id) {
        continue;
      }
      const double iou =
          cuboid_iou_3d(objects[i].cuboid, objects[j].cuboid);
      if (iou > 0) m.pairwise.push_back({np + i, np + j, w.w_oo * iou});
    }
  }
  // Object-plane: volume fraction hidden behind the wall.
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < int(objects.size()); ++j) {
      const double occ =
          occluded_volume_ratio(objects[j].cuboid, walls[i]);
      if (occ > 0) m.pairwise.push_back({i, np + j, w.w_ol * occ});
    }
  }
  // One at-most-one clique per object instance with several proposals.
  std::map<int, std::vector<int>> by_instance;
  for (int j = 0; j < int(objects.size()); ++j) {
    by_instance[objects[j].instance_id].push_back(np + j);
  }
  for (auto& [id, members] : by_instance) {
    if (members.size() >= 2) m.cliques.push_back(std::move(members));
  }
  return m;
}

/// Eq. 1 energy of a binary assignment.
inline double energy_of(const CrfModel& m, const std::vector<int>& x) {
  double e = 0.0;
  for (int i = 0; i < m.num_vars(); ++i) {
    if (x[i]) e += m.vars[i].unary1;
  }
  for (const auto& pw : m.pairwise) {
    if (x[pw.i] && x[pw.j]) e += pw.energy;
  }
  for (const auto& clique : m.cliques) {
    int selected = 0;
    for (int i : clique) selected += x[i];
    if (selected > 1) e += kBigEnergy;
  }
  return e;
}

}  // namespace opslam

#endif  // OPSLAM_CRF_MODEL_HPP_
