/*
 * Copyright (c) 2026, the pnsm authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>

namespace pnsm {

/// splitmix64 step; used for seeding and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** with explicit state, reproducible on every platform.
class Xoshiro256 {
 public:
  Xoshiro256() : Xoshiro256(0) {}

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Seeded random stream with documented substream splitting.
///
/// Substream `id` of seed `s` is the xoshiro256** generator seeded with
/// splitmix64 applied to (s XOR id * 0xd1342543de82ef95). Substreams advance
/// independently, so the draw order across streams never matters. Generator
/// conventions used by the library:
///   stream 0 -- curve parameters t,
///   stream 1 -- first noise amplitude,
///   stream 2 -- second noise amplitude.
class RandomStream {
 public:
  static RandomStream substream(std::uint64_t seed, std::uint64_t id) {
    return RandomStream(seed ^ (id * 0xd1342543de82ef95ULL));
  }

  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Gaussian draw via the cosine Box-Muller branch. Consumes exactly two
  /// uniforms per call; the sine twin is discarded to keep the stream
  /// position a pure function of the draw count.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // in (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  Xoshiro256 gen_;
};

}  // namespace pnsm
