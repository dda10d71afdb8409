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
#ifndef OPSLAM_CRF_INFERENCE_HPP_
#define OPSLAM_CRF_INFERENCE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "opslam/crf/model.hpp"

namespace opslam {

/// Min-sum message for a binary variable: element 0 holds m(x=0).
using MsgPair = std::array<double, 2>;

/// At-most-one clique factor-to-variable update in O(N) total.
///
/// Valid clique states are "all zeros" plus "exactly member k selected".
/// With S0 = sum_j m_j(0) and s_k = S0 - m_k(0) + m_k(1), the outgoing
/// messages are
///   m_{c->i}(1) = s_i - m_i(1)
///   m_{c->i}(0) = min(S0, min_{k != i} s_k) - m_i(0)
/// so tracking the two smallest s_k serves every member at once.
inline std::vector<MsgPair> clique_messages(const std::vector<MsgPair>& in) {
  const int n = int(in.size());
  double s0 = 0.0;
  for (const auto& m : in) s0 += m[0];

  double min_s = std::numeric_limits<double>::infinity();
  double sndmin_s = std::numeric_limits<double>::infinity();
  int argmin = -1;
  std::vector<double> s(in.size());
  for (int k = 0; k < n; ++k) {
    s[k] = s0 - in[k][0] + in[k][1];
    if (s[k] < min_s) {
      sndmin_s = min_s;
      min_s = s[k];
      argmin = k;
    } else if (s[k] < sndmin_s) {
      sndmin_s = s[k];
    }
  }

  std::vector<MsgPair> out(in.size());
  for (int i = 0; i < n; ++i) {
    const double best_other = (i == argmin) ? sndmin_s : min_s;
    out[i][1] = s[i] - in[i][1];
    out[i][0] = std::min(s0, best_other) - in[i][0];
  }
  return out;
}

/// Reference implementation: explicit minimum over the N+1 valid states
/// with per-state sums, no incremental reuse. Quadratic; for testing.
inline std::vector<MsgPair> clique_messages_naive(
    const std::vector<MsgPair>& in) {
  const int n = int(in.size());
  std::vector<MsgPair> out(in.size());
  for (int i = 0; i < n; ++i) {
    // x_i = 1 leaves one valid state: every other member zero.
    double all_zero = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) all_zero += in[j][0];
    }
    out[i][1] = all_zero;
    // x_i = 0: all zeros, or exactly one other member k selected.
    double best = all_zero;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += in[j][j == k ? 1 : 0];
      }
      best = std::min(best, sum);
    }
    out[i][0] = best;
  }
  return out;
}

/// Reference implementation enumerating all 2^N assignments with the
/// at-most-one potential as an additive BIG term. For benchmarks.
inline std::vector<MsgPair> clique_messages_bruteforce(
    const std::vector<MsgPair>& in) {
  const int n = int(in.size());
  if (n > 25) throw TooLarge("clique_messages_bruteforce: clique too big");
  const std::uint64_t total_states = std::uint64_t(1) << n;
  std::vector<double> state_sum(total_states);
  std::vector<int> popcount(total_states);
  for (std::uint64_t a = 0; a < total_states; ++a) {
    double sum = 0.0;
    int pop = 0;
    for (int j = 0; j < n; ++j) {
      const int xj = int((a >> j) & 1u);
      sum += in[j][xj];
      pop += xj;
    }
    state_sum[a] = sum;
    popcount[a] = pop;
  }
  std::vector<MsgPair> out(in.size());
  for (int i = 0; i < n; ++i) {
    double best[2] = {std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    for (std::uint64_t a = 0; a < total_states; ++a) {
      const int xi = int((a >> i) & 1u);
      const double pot = popcount[a] > 1 ? kBigEnergy : 0.0;
      best[xi] = std::min(best[xi], pot + state_sum[a] - in[i][xi]);
    }
    out[i] = {best[0], best[1]};
  }
  return out;
}

struct BpState {
  int iteration = 0;
  double max_delta = 0.0;
  bool converged = false;
  // Per-variable belief pairs: unary plus all incoming factor messages.
  std::vector<MsgPair> beliefs;
};

namespace detail {

struct BpFactor {
  bool is_clique = false;
  double pairwise_energy = 0.0;
  std::vector<int> members;  // size 2 for pairwise
};

inline void normalize_min(MsgPair* m) {
  const double lo = std::min((*m)[0], (*m)[1]);
  (*m)[0] -= lo;
  (*m)[1] -= lo;
}

}  // namespace detail

/// Damped synchronous min-sum loopy BP over the CRF factor graph.
inline BpState run_lbp(const CrfModel& model, int max_iters = 50,
                       double damping = 0.5, double tol = 1e-6) {
  const int nv = model.num_vars();
  std::vector<detail::BpFactor> factors;
  factors.reserve(model.pairwise.size() + model.cliques.size());
  for (const auto& pw : model.pairwise) {
    detail::BpFactor f;
    f.pairwise_energy = pw.energy;
    f.members = {pw.i, pw.j};
    factors.push_back(std::move(f));
  }
  for (const auto& clique : model.cliques) {
    detail::BpFactor f;
    f.is_clique = true;
    f.members = clique;
    factors.push_back(std::move(f));
  }
  const int nf = int(factors.size());

  // Flattened per-(factor, slot) message storage plus variable adjacency.
  std::vector<int> offset(factors.size() + 1, 0);
  for (int f = 0; f < nf; ++f) {
    offset[f + 1] = offset[f] + int(factors[f].members.size());
  }
  const int num_edges = offset[nf];
  std::vector<MsgPair> msg_fv(num_edges, MsgPair{0, 0});
  std::vector<MsgPair> msg_vf(num_edges, MsgPair{0, 0});
  std::vector<std::vector<int>> var_edges(nv);
  for (int f = 0; f < nf; ++f) {
    for (int s = 0; s < int(factors[f].members.size()); ++s) {
      var_edges[factors[f].members[s]].push_back(offset[f] + s);
    }
  }

  BpState state;
  auto belief = [&](int i) {
    MsgPair b = {0.0, model.vars[i].unary1};
    for (int e : var_edges[i]) {
      b[0] += msg_fv[e][0];
      b[1] += msg_fv[e][1];
    }
    return b;
  };

  for (int it = 1; it <= max_iters; ++it) {
    // Variable-to-factor pass from the current factor-to-variable messages.
    for (int f = 0; f < nf; ++f) {
      for (int s = 0; s < int(factors[f].members.size()); ++s) {
        const int e = offset[f] + s;
        MsgPair b = belief(factors[f].members[s]);
        b[0] -= msg_fv[e][0];
        b[1] -= msg_fv[e][1];
        detail::normalize_min(&b);
        msg_vf[e] = b;
      }
    }
    // Factor-to-variable pass, damped against the previous iterate.
    double max_delta = 0.0;
    for (int f = 0; f < nf; ++f) {
      std::vector<MsgPair> fresh;
      if (factors[f].is_clique) {
        std::vector<MsgPair> in(factors[f].members.size());
        for (int s = 0; s < int(in.size()); ++s) in[s] = msg_vf[offset[f] + s];
        fresh = clique_messages(in);
      } else {
        const double w = factors[f].pairwise_energy;
        fresh.resize(2);
        for (int s = 0; s < 2; ++s) {
          const MsgPair& other = msg_vf[offset[f] + (1 - s)];
          fresh[s][0] = std::min(other[0], other[1]);
          fresh[s][1] = std::min(other[0], w + other[1]);
        }
      }
      for (int s = 0; s < int(fresh.size()); ++s) {
        const int e = offset[f] + s;
        MsgPair next;
        next[0] = damping * msg_fv[e][0] + (1 - damping) * fresh[s][0];
        next[1] = damping * msg_fv[e][1] + (1 - damping) * fresh[s][1];
        detail::normalize_min(&next);
        max_delta = std::max(max_delta,
                             std::max(std::abs(next[0] - msg_fv[e][0]),
                                      std::abs(next[1] - msg_fv[e][1])));
        msg_fv[e] = next;
      }
    }
    state.iteration = it;
    state.max_delta = max_delta;
    if (max_delta < tol) {
      state.converged = true;
      break;
    }
  }

  state.beliefs.resize(nv);
  for (int i = 0; i < nv; ++i) state.beliefs[i] = belief(i);
  return state;
}

/// Per-variable belief argmin (ties to 0), then clique repair keeping only
/// the best member, then a deterministic single-flip descent. Beliefs tie
/// when several assignments share the optimum (symmetric pairs), so the
/// descent resolves such ties toward the strictly lower-energy state; it is
/// what makes the decode exact on tree-structured models. Flipping a
/// variable on in an occupied clique costs BIG, so feasibility is kept.
inline std::vector<int> map_select(const CrfModel& model,
                                   const BpState& state) {
  const int nv = model.num_vars();
  std::vector<int> x(nv, 0);
  for (int i = 0; i < nv; ++i) {
    x[i] = state.beliefs[i][1] < state.beliefs[i][0] ? 1 : 0;
  }
  for (const auto& clique : model.cliques) {
    int best = -1;
    for (int i : clique) {
      if (!x[i]) continue;
      if (best < 0 || state.beliefs[i][1] < state.beliefs[best][1]) best = i;
    }
    for (int i : clique) {
      if (x[i] && i != best) x[i] = 0;
    }
  }
  double energy = energy_of(model, x);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < nv; ++i) {
      x[i] = 1 - x[i];
      const double e = energy_of(model, x);
      if (e < energy) {
        energy = e;
        improved = true;
      } else {
        x[i] = 1 - x[i];
      }
    }
  }
  return x;
}

/// Unary-only baseline: every variable with negative unary is selected,
/// then each clique keeps only its lowest-unary member.
inline std::vector<int> baseline_select(const CrfModel& model) {
  const int nv = model.num_vars();
  std::vector<int> x(nv, 0);
  for (int i = 0; i < nv; ++i) x[i] = model.vars[i].unary1 < 0 ? 1 : 0;
  for (const auto& clique : model.cliques) {
    int best = -1;
    for (int i : clique) {
      if (!x[i]) continue;
      if (best < 0 || model.vars[i].unary1 < model.vars[best].unary1) best = i;
    }
    for (int i : clique) {
      if (x[i] && i != best) x[i] = 0;
    }
  }
  return x;
}

}  // namespace opslam

#endif  // OPSLAM_CRF_INFERENCE_HPP_
