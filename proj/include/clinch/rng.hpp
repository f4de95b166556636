#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The Clinch Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <cstdint>

namespace clinch::rng {

// SplitMix64 (Steele, Lea, Flood / Vigna). Pure 64-bit integer arithmetic plus
// one exact power-of-two scaling, so streams are bit-identical across
// platforms. Substreams are derived by offsetting the seed with a multiple of
// the golden-ratio increment: substream k of seed s starts from state
// s + (k+1) * 0x9E3779B97F4A7C15.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Starting state of substream `index` of `seed`.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return seed + kGolden * (index + 1);
}

struct Stream {
  std::uint64_t state = 0;

  explicit Stream(std::uint64_t seed) : state(seed) {}
  Stream(std::uint64_t seed, std::uint64_t index) : state(substream(seed, index)) {}

  std::uint64_t next_u64() { return splitmix64(state); }

  /// Uniform double in [0, 1), 53 significant bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (lo, hi] (never returns lo).
  double next_positive(double lo, double hi) { return hi - (hi - lo) * next_uniform(); }

  /// Uniform integer in [lo, hi].
  int next_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next_u64() % span);
  }
};

}  // namespace clinch::rng
