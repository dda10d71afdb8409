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
#ifndef OPSLAM_CORE_RNG_HPP_
#define OPSLAM_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "opslam/core/types.hpp"

namespace opslam {

// Deterministic RNG with hand-rolled distributions so that outputs are
// bit-identical across standard libraries and platforms. xoshiro256++ core,
// splitmix64 stream derivation.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : s_) word = splitmix64(x);
  }

  /// Independent substream for (seed, stream, index), e.g. one per frame.
  static Rng stream(uint64_t seed, uint64_t stream_tag, uint64_t index = 0) {
    uint64_t x = seed;
    x = splitmix64(x) ^ (0x9e3779b97f4a7c15ULL * (stream_tag + 1));
    x = splitmix64(x) ^ (0xbf58476d1ce4e5b9ULL * (index + 1));
    return Rng(splitmix64(x));
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(next_u64() % uint64_t(hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (no cached spare; deterministic).
  double gauss() {
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double gauss(double mean, double sigma) { return mean + sigma * gauss(); }

  Vec2 gauss2(double sigma) { return Vec2(gauss(0, sigma), gauss(0, sigma)); }
  Vec3 gauss3(double sigma) {
    return Vec3(gauss(0, sigma), gauss(0, sigma), gauss(0, sigma));
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4];
};

}  // namespace opslam

#endif  // OPSLAM_CORE_RNG_HPP_
