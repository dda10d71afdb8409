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
#ifndef OPSLAM_ESTIMATION_GRAPH_HPP_
#define OPSLAM_ESTIMATION_GRAPH_HPP_

#include <vector>

#include "opslam/estimation/factor.hpp"

namespace opslam {

struct FactorGraph {
  CameraIntrinsics intrinsics;
  Plane world_ground = Plane(Vec4(0, 0, 1, 0));
  std::vector<Vertex> vertices;
  std::vector<Factor> factors;

  int add_vertex(const Vertex& v) {
    vertices.push_back(v);
    return int(vertices.size()) - 1;
  }

  int add_factor(const Factor& f) {
    factors.push_back(f);
    return int(factors.size()) - 1;
  }

  FactorEval evaluate(const Factor& f, bool want_jac) const {
    return evaluate_factor(intrinsics, world_ground, vertices, f, want_jac);
  }
};

}  // namespace opslam

#endif  // OPSLAM_ESTIMATION_GRAPH_HPP_
