// Copyright 2026 The noisytree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace noisytree {

// SplitMix64 finalizer, used as a stateless hash so that every random draw is
// a pure function of (seed, stream, node, index). Draws therefore do not
// depend on how work is split across threads.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t node,
                                    std::uint64_t index) {
  return mix64(mix64(mix64(mix64(seed) ^ stream) ^ node) ^ index);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t node,
                                 std::uint64_t index) {
  return static_cast<double>(counter_key(seed, stream, node, index) >> 11) * 0x1.0p-53;
}

// Seed for a named sub-experiment, e.g. (sweep seed, grid point, trial).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  return counter_key(seed, a + 0x5851f42d4c957f2dULL, b, c);
}

}  // namespace noisytree
