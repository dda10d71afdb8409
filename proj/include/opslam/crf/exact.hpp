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
#ifndef OPSLAM_CRF_EXACT_HPP_
#define OPSLAM_CRF_EXACT_HPP_

#include <cstdint>
#include <vector>

#include "opslam/crf/model.hpp"

namespace opslam {

struct ExactMapResult {
  std::vector<int> assignment;
  double energy = 0.0;
};

namespace detail {

inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace detail

/// Global minimum of the CRF energy over assignments satisfying every
/// at-most-one clique, by exhaustive enumeration. Ties break toward the
/// lexicographically smallest assignment.
inline ExactMapResult exact_map(const CrfModel& m) {
  const int n = m.num_vars();
  if (n > 20) throw TooLarge("exact_map: more than 20 variables");
  ExactMapResult best;
  best.assignment.assign(n, 0);
  best.energy = energy_of(m, best.assignment);

  std::vector<int> x(n, 0);
  const std::uint64_t total = std::uint64_t(1) << n;
  for (std::uint64_t a = 1; a < total; ++a) {
    for (int i = 0; i < n; ++i) x[i] = int((a >> i) & 1u);
    bool valid = true;
    for (const auto& clique : m.cliques) {
      int selected = 0;
      for (int i : clique) selected += x[i];
      if (selected > 1) {
        valid = false;
        break;
      }
    }
    if (!valid) continue;
    const double e = energy_of(m, x);
    if (e < best.energy ||
        (e == best.energy && detail::lex_less(x, best.assignment))) {
      best.energy = e;
      best.assignment = x;
    }
  }
  return best;
}

}  // namespace opslam

#endif  // OPSLAM_CRF_EXACT_HPP_
