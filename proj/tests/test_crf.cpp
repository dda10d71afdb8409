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

#include <chrono>
#include <cmath>
#include <vector>

#include "opslam/core/rng.hpp"
#include "opslam/crf/exact.hpp"
#include "opslam/crf/inference.hpp"
#include "opslam/crf/model.hpp"
#include "opslam/crf/proposals.hpp"
#include "test_util.hpp"

namespace opslam {
namespace {

constexpr double kDeg = kPi / 180.0;

std::vector<MsgPair> random_messages(Rng* rng, int n, double span = 3.0) {
  std::vector<MsgPair> in(n);
  for (auto& m : in) m = {rng->uniform(-span, span), rng->uniform(-span, span)};
  return in;
}

CrfModel unary_model(const std::vector<double>& unaries) {
  CrfModel m;
  for (int i = 0; i < int(unaries.size()); ++i) {
    m.vars.push_back({CrfModel::VarKind::Object, i, i, unaries[i]});
  }
  return m;
}

/// Random loopy model: nonnegative pairwise penalties (as produced by the
/// overlap potentials) over mixed-sign unaries, plus disjoint cliques.
CrfModel random_model(Rng* rng, int max_vars = 12) {
  const int n = rng->uniform_int(2, max_vars);
  CrfModel m;
  for (int i = 0; i < n; ++i) {
    m.vars.push_back({CrfModel::VarKind::Object, i, i,
                      rng->uniform(-1.0, 0.5)});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng->bernoulli(0.4)) {
        m.pairwise.push_back({i, j, rng->uniform(0.0, 1.5)});
      }
    }
  }
  int i = 0;
  while (i + 1 < n) {
    const int size = rng->uniform_int(1, 4);
    if (size >= 2 && i + size <= n) {
      std::vector<int> clique;
      for (int k = 0; k < size; ++k) clique.push_back(i + k);
      m.cliques.push_back(std::move(clique));
      i += size;
    } else {
      ++i;
    }
  }
  return m;
}

double assignment_energy_gap(const CrfModel& m, const std::vector<int>& x) {
  return energy_of(m, x) - exact_map(m).energy;
}

TEST(CliqueMessages, WorkedTwoMemberExample) {
  const std::vector<MsgPair> in = {{0.0, -1.0}, {0.0, -2.0}};
  const auto out = clique_messages(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out[0][0], -2.0, 1e-15);
  EXPECT_NEAR(out[0][1], 0.0, 1e-15);
  EXPECT_NEAR(out[1][0], -1.0, 1e-15);
  EXPECT_NEAR(out[1][1], 0.0, 1e-15);
}

TEST(CliqueMessages, AllZeroMessagesStayZero) {
  const std::vector<MsgPair> in(7, MsgPair{0.0, 0.0});
  for (const auto& m : clique_messages(in)) {
    EXPECT_EQ(m[0], 0.0);
    EXPECT_EQ(m[1], 0.0);
  }
}

TEST(CliqueMessages, MatchesNaiveEnumeration) {
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(2, 15);
    const auto in = random_messages(&rng, n);
    const auto fast = clique_messages(in);
    const auto ref = clique_messages_naive(in);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(fast[i][0], ref[i][0], 1e-9) << "trial " << trial;
      EXPECT_NEAR(fast[i][1], ref[i][1], 1e-9) << "trial " << trial;
    }
  }
}

TEST(CliqueMessages, MatchesBruteforceEnumeration) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(2, 12);
    const auto in = random_messages(&rng, n, 50.0);
    const auto fast = clique_messages(in);
    const auto ref = clique_messages_bruteforce(in);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(fast[i][0], ref[i][0], 1e-9);
      EXPECT_NEAR(fast[i][1], ref[i][1], 1e-9);
    }
  }
}

TEST(CliqueMessages, BruteforceRejectsLargeCliques) {
  const std::vector<MsgPair> in(26, MsgPair{0.0, 0.0});
  EXPECT_THROW(clique_messages_bruteforce(in), TooLarge);
}

TEST(CliqueMessages, RuntimeScalesLinearly) {
  Rng rng(23);
  const auto in1 = random_messages(&rng, 1000);
  const auto in2 = random_messages(&rng, 2000);
  auto time_us = [](const std::vector<MsgPair>& in, int reps) {
    volatile double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) {
      const auto out = clique_messages(in);
      sink = sink + out[0][0];
    }
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
  };
  time_us(in1, 50);  // warm-up
  time_us(in2, 50);
  std::vector<double> ratios;
  for (int batch = 0; batch < 7; ++batch) {
    const double t1 = time_us(in1, 200);
    const double t2 = time_us(in2, 100);
    ratios.push_back(t2 / t1);
  }
  const double ratio = testutil::median(ratios);
  EXPECT_GE(ratio, 1.5) << "doubling N should roughly double the time";
  EXPECT_LE(ratio, 3.0);
}

TEST(BuildCrf, PlaneUnaryFromEquationTwo) {
  PlaneProposal p;
  p.edge3d = {Vec3(2, -1, 0), Vec3(2, 1, 0)};
  p.fov_angle = 0.5;
  p.contour_dist = 0.0;
  const Pose cam(Mat3::Identity(), Vec3(0, 0, 1.5));
  const CrfModel m = build_crf({p}, {}, cam, CrfWeights{});
  ASSERT_EQ(m.num_vars(), 1);
  EXPECT_EQ(m.vars[0].kind, CrfModel::VarKind::Plane);
  EXPECT_EQ(m.vars[0].proposal_index, 0);
  EXPECT_EQ(m.vars[0].instance_id, -1);
  EXPECT_NEAR(m.vars[0].unary1, -0.5, 1e-15);
  EXPECT_TRUE(m.pairwise.empty());
  EXPECT_TRUE(m.cliques.empty());
  // Nonzero contour distance scales the unary down.
  PlaneProposal q = p;
  q.contour_dist = 0.4;
  const CrfModel m2 = build_crf({q}, {}, cam, CrfWeights{});
  EXPECT_NEAR(m2.vars[0].unary1, -0.5 * 0.6, 1e-15);
}

TEST(BuildCrf, ObjectUnaryAndSameInstanceClique) {
  CuboidProposal a, b;
  a.cuboid = Cuboid(Pose(Mat3::Identity(), Vec3(0, 3, 0.5)), Vec3(1, 1, 1));
  a.instance_id = 7;
  a.fit_error = 0.2;
  b.cuboid =
      Cuboid(Pose(Mat3::Identity(), Vec3(0.5, 3, 0.5)), Vec3(1, 1, 1));
  b.instance_id = 7;
  b.fit_error = 0.6;
  const Pose cam(Mat3::Identity(), Vec3(0, 0, 1.5));
  const CrfModel m = build_crf({}, {a, b}, cam, CrfWeights{});
  ASSERT_EQ(m.num_vars(), 2);
  EXPECT_EQ(m.vars[0].kind, CrfModel::VarKind::Object);
  EXPECT_EQ(m.vars[0].instance_id, 7);
  EXPECT_NEAR(m.vars[0].unary1, -0.8, 1e-15);
  EXPECT_NEAR(m.vars[1].unary1, -0.4, 1e-15);
  // Same instance: no pairwise even though the cuboids overlap.
  EXPECT_TRUE(m.pairwise.empty());
  ASSERT_EQ(m.cliques.size(), 1u);
  EXPECT_EQ(m.cliques[0], (std::vector<int>{0, 1}));
}

TEST(BuildCrf, DifferentInstancesGetIouPairwise) {
  CuboidProposal a, b;
  a.cuboid = Cuboid(Pose(Mat3::Identity(), Vec3(0, 3, 0.5)), Vec3(1, 1, 1));
  a.instance_id = 1;
  b.cuboid =
      Cuboid(Pose(Mat3::Identity(), Vec3(0.5, 3, 0.5)), Vec3(1, 1, 1));
  b.instance_id = 2;
  const Pose cam(Mat3::Identity(), Vec3(0, 0, 1.5));
  const CrfModel m = build_crf({}, {a, b}, cam, CrfWeights{});
  ASSERT_EQ(m.pairwise.size(), 1u);
  EXPECT_EQ(m.pairwise[0].i, 0);
  EXPECT_EQ(m.pairwise[0].j, 1);
  // w_oo = 2 times IoU = 1/3 for half-offset unit cubes.
  EXPECT_NEAR(m.pairwise[0].energy, 2.0 / 3.0, 1e-12);
  EXPECT_TRUE(m.cliques.empty());
}

TEST(BuildCrf, PlaneOverlapPenalties) {
  const Vec3 cam_t(0, 0, 1.5);
  auto arc_proposal = [&](double a0_deg, double a1_deg) {
    PlaneProposal p;
    p.edge3d = {Vec3(2 * std::cos(a0_deg * kDeg), 2 * std::sin(a0_deg * kDeg),
                     0),
                Vec3(2 * std::cos(a1_deg * kDeg), 2 * std::sin(a1_deg * kDeg),
                     0)};
    p.fov_angle = (a1_deg - a0_deg) * kDeg;
    p.contour_dist = 0.0;
    return p;
  };
  const Pose cam(Mat3::Identity(), cam_t);
  // 10 degree azimuth overlap: hard penalty.
  const CrfModel big = build_crf({arc_proposal(0, 40), arc_proposal(30, 70)},
                                 {}, cam, CrfWeights{});
  ASSERT_EQ(big.pairwise.size(), 1u);
  EXPECT_EQ(big.pairwise[0].energy, kBigEnergy);
  // 2 degree overlap: soft ratio penalty w_ll * 2 / (40 + 40 - 2).
  const CrfModel soft = build_crf({arc_proposal(0, 40), arc_proposal(38, 78)},
                                  {}, cam, CrfWeights{});
  ASSERT_EQ(soft.pairwise.size(), 1u);
  EXPECT_NEAR(soft.pairwise[0].energy, 2.0 * (2.0 / 78.0), 1e-9);
  // Disjoint arcs: no pairwise at all.
  const CrfModel none = build_crf({arc_proposal(0, 40), arc_proposal(50, 90)},
                                  {}, cam, CrfWeights{});
  EXPECT_TRUE(none.pairwise.empty());
}

TEST(BuildCrf, ObjectBehindWallGetsOcclusionPenalty) {
  PlaneProposal wall;
  wall.edge3d = {Vec3(1, -2, 0), Vec3(1, 2, 0)};  // wall x = 1
  wall.fov_angle = 0.5;
  CuboidProposal obj;
  obj.cuboid = Cuboid(Pose(Mat3::Identity(), Vec3(3, 0, 0.5)), Vec3(1, 1, 1));
  obj.instance_id = 0;
  const Pose cam(Mat3::Identity(), Vec3(-2, 0, 1.5));
  const CrfModel m = build_crf({wall}, {obj}, cam, CrfWeights{});
  ASSERT_EQ(m.num_vars(), 2);
  ASSERT_EQ(m.pairwise.size(), 1u);
  EXPECT_EQ(m.pairwise[0].i, 0);
  EXPECT_EQ(m.pairwise[0].j, 1);
  EXPECT_NEAR(m.pairwise[0].energy, 2.0, 1e-9);  // w_ol * ratio 1
  // Object in front of the wall: no penalty.
  CuboidProposal front = obj;
  front.cuboid.pose.translation = Vec3(-0.5, 0, 0.5);
  const CrfModel m2 = build_crf({wall}, {front}, cam, CrfWeights{});
  EXPECT_TRUE(m2.pairwise.empty());
}

TEST(RunLbp, NoFactorsConvergesImmediately) {
  const CrfModel m = unary_model({-0.5, 0.3, 0.0});
  const BpState state = run_lbp(m);
  EXPECT_TRUE(state.converged);
  EXPECT_EQ(state.iteration, 1);
  ASSERT_EQ(state.beliefs.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(state.beliefs[i][0], 0.0);
    EXPECT_EQ(state.beliefs[i][1], m.vars[i].unary1);
  }
}

TEST(RunLbp, SingleCliqueBeliefsMatchExactStateCosts) {
  CrfModel m = unary_model({-0.5, -0.3, 0.2});
  m.cliques.push_back({0, 1, 2});
  // Exact min-marginal differences over the 4 valid states
  // {none, only0, only1, only2} with energies {0, -0.5, -0.3, 0.2}.
  const double expect_diff[3] = {-0.5 - (-0.3), -0.3 - (-0.5), 0.2 - (-0.5)};
  // Undamped: the single factor reaches its fixed point in one sweep.
  const BpState undamped = run_lbp(m, 2, 0.0, 1e-12);
  EXPECT_TRUE(undamped.converged);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(undamped.beliefs[i][1] - undamped.beliefs[i][0],
                expect_diff[i], 1e-12);
  }
  // Default damping converges to the same beliefs.
  const BpState damped = run_lbp(m);
  EXPECT_TRUE(damped.converged);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(damped.beliefs[i][1] - damped.beliefs[i][0], expect_diff[i],
                1e-4);
  }
}

TEST(RunLbp, ChainOfThreeIsExact) {
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    CrfModel m = unary_model({rng.uniform(-1, 1), rng.uniform(-1, 1),
                              rng.uniform(-1, 1)});
    m.pairwise.push_back({0, 1, rng.uniform(-0.5, 1.5)});
    m.pairwise.push_back({1, 2, rng.uniform(-0.5, 1.5)});
    const BpState state = run_lbp(m);
    const std::vector<int> x = map_select(m, state);
    EXPECT_NEAR(energy_of(m, x), exact_map(m).energy, 1e-12)
        << "trial " << trial;
  }
}

TEST(MapSelect, CliqueKeepsLowestUnary) {
  CrfModel m = unary_model({-0.5, -0.3});
  m.vars[1].instance_id = m.vars[0].instance_id;
  m.cliques.push_back({0, 1});
  const std::vector<int> x = map_select(m, run_lbp(m));
  EXPECT_EQ(x, (std::vector<int>{1, 0}));
  EXPECT_NEAR(energy_of(m, x), -0.5, 1e-12);
  const ExactMapResult exact = exact_map(m);
  EXPECT_EQ(exact.assignment, x);
  EXPECT_NEAR(exact.energy, -0.5, 1e-12);
}

TEST(MapSelect, TiedRepulsivePairSelectsExactlyOne) {
  CrfModel m = unary_model({-0.4, -0.4});
  m.pairwise.push_back({0, 1, 1.0});
  const std::vector<int> x = map_select(m, run_lbp(m));
  EXPECT_EQ(x[0] + x[1], 1) << "E=-0.4 beats both-off (0) and both-on (0.2)";
  EXPECT_NEAR(energy_of(m, x), -0.4, 1e-12);
  EXPECT_NEAR(exact_map(m).energy, -0.4, 1e-12);
}

TEST(MapSelect, EmptyModel) {
  const CrfModel m;
  const BpState state = run_lbp(m);
  EXPECT_TRUE(map_select(m, state).empty());
  const ExactMapResult exact = exact_map(m);
  EXPECT_TRUE(exact.assignment.empty());
  EXPECT_EQ(exact.energy, 0.0);
}

TEST(BaselineSelect, GreedyUnaryWithCliqueRepair) {
  CrfModel m = unary_model({-0.5, -0.3, 0.2, -0.1});
  m.cliques.push_back({0, 1});
  const std::vector<int> x = baseline_select(m);
  EXPECT_EQ(x, (std::vector<int>{1, 0, 0, 1}));
}

TEST(ExactMap, AllPositiveUnariesSelectNothing) {
  const CrfModel m = unary_model({0.5, 0.1, 2.0});
  const ExactMapResult r = exact_map(m);
  EXPECT_EQ(r.assignment, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(r.energy, 0.0);
}

TEST(ExactMap, RejectsMoreThanTwentyVariables) {
  const CrfModel ok = unary_model(std::vector<double>(20, -0.1));
  EXPECT_NO_THROW(exact_map(ok));
  const CrfModel big = unary_model(std::vector<double>(21, -0.1));
  EXPECT_THROW(exact_map(big), TooLarge);
}

TEST(EnergyOf, Examples) {
  CrfModel m = unary_model({-0.5, -0.3});
  m.cliques.push_back({0, 1});
  EXPECT_EQ(energy_of(m, {0, 0}), 0.0);
  EXPECT_NEAR(energy_of(m, {1, 0}), -0.5, 1e-15);
  EXPECT_GE(energy_of(m, {1, 1}), 1e9);
  CrfModel pw = unary_model({-0.2, -0.2});
  pw.pairwise.push_back({0, 1, 0.7});
  EXPECT_NEAR(energy_of(pw, {1, 1}), -0.4 + 0.7, 1e-15);
}

TEST(Invariants, MapSelectAlwaysSatisfiesCliques) {
  Rng rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    const CrfModel m = random_model(&rng);
    const std::vector<int> x = map_select(m, run_lbp(m));
    for (const auto& clique : m.cliques) {
      int selected = 0;
      for (int i : clique) selected += x[i];
      EXPECT_LE(selected, 1) << "trial " << trial;
    }
  }
}

TEST(Invariants, LoopyQualityAgainstExactAndGreedy) {
  Rng rng(26);
  int within5 = 0, not_worse = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const CrfModel m = random_model(&rng);
    const std::vector<int> x = map_select(m, run_lbp(m));
    const double e_map = energy_of(m, x);
    const double e_exact = exact_map(m).energy;
    const double e_greedy = energy_of(m, baseline_select(m));
    if (e_map <= e_exact + 0.05 * std::abs(e_exact) + 1e-12) ++within5;
    if (e_map <= e_greedy + 1e-12) ++not_worse;
  }
  EXPECT_GE(within5, int(0.8 * trials));
  EXPECT_GE(not_worse, int(0.9 * trials));
}

TEST(Invariants, TreeModelsDecodeExactly) {
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    // A single at-most-one clique over n variables is a tree.
    const int n = rng.uniform_int(2, 8);
    std::vector<double> unaries(n);
    for (auto& u : unaries) u = rng.uniform(-1.0, 1.0);
    CrfModel m = unary_model(unaries);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    m.cliques.push_back(all);
    const std::vector<int> x = map_select(m, run_lbp(m));
    EXPECT_NEAR(energy_of(m, x), exact_map(m).energy, 1e-12)
        << "trial " << trial;
  }
}

TEST(Invariants, ScaleInvarianceOfDecode) {
  Rng rng(28);
  for (int trial = 0; trial < 50; ++trial) {
    const CrfModel m = random_model(&rng, 10);
    const std::vector<int> base = map_select(m, run_lbp(m));
    for (double scale : {0.25, 4.0}) {
      CrfModel scaled = m;
      for (auto& v : scaled.vars) v.unary1 *= scale;
      for (auto& p : scaled.pairwise) p.energy *= scale;
      const std::vector<int> x = map_select(scaled, run_lbp(scaled));
      EXPECT_EQ(x, base) << "trial " << trial << " scale " << scale;
    }
  }
}

TEST(Invariants, EnergyGapNonNegative) {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const CrfModel m = random_model(&rng, 10);
    const std::vector<int> x = map_select(m, run_lbp(m));
    EXPECT_GE(assignment_energy_gap(m, x), -1e-12);
  }
}

}  // namespace
}  // namespace opslam
