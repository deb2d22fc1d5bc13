/*
 * Copyright (c) the rmitbench authors.
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

namespace rmitbench {

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9e3779b97f4a7c15ULL;

// State-to-output mapping of one SplitMix64 step (the finalizer).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 (Sebastiano Vigna, public domain); see https://prng.di.unimi.it.
// Project-wide PRNG: integer-only state transitions make seeded plans and
// simulated datasets reproduce bit-for-bit on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_mix(state_ += kSplitMix64Gamma); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n) for n >= 1, via 64x64->128 fixed-point multiply.
  // One draw per call, no rejection; the bias is bounded by n / 2^64.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via Box-Muller, cosine branch only. Consumes exactly two
  // outputs per call so stream positions stay easy to reason about.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  std::uint64_t state_;
};

// Seed of sub-stream `tag` under `parent`: the tag-th value of the SplitMix64
// sequence whose state starts at parent (tag 0 is the finalized parent
// itself). Every random decision in the project draws from a sub-stream
// addressed this way, so the scheduler, the simulator, and each bootstrap
// replicate never share draws.
constexpr std::uint64_t substream_seed(std::uint64_t parent, std::uint64_t tag) {
  return splitmix64_mix(parent + kSplitMix64Gamma * tag);
}

// Sub-stream tags under an experiment's master seed.
namespace stream_tag {
inline constexpr std::uint64_t kScheduler = 0x01;
inline constexpr std::uint64_t kBootstrapPaired = 0x02;
inline constexpr std::uint64_t kBootstrapV1 = 0x03;
inline constexpr std::uint64_t kBootstrapV2 = 0x04;
inline constexpr std::uint64_t kPlatform = 0x10;
inline constexpr std::uint64_t kPlatformTraditionalV1 = 0x11;
inline constexpr std::uint64_t kPlatformTraditionalV2 = 0x12;
inline constexpr std::uint64_t kWorkload = 0x20;
inline constexpr std::uint64_t kStudyGrid = 0x30;
}  // namespace stream_tag

}  // namespace rmitbench
