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
#include <vector>

#include "noisytree/model.hpp"
#include "noisytree/oracle.hpp"

namespace noisytree {

// N x n matrix of symbols in [0, k), row-major (one row per sample).
class SampleMatrix {
 public:
  SampleMatrix(std::uint64_t rows, int nodes, int k);
  SampleMatrix(std::uint64_t rows, int nodes, int k, std::vector<std::uint8_t> values);

  std::uint64_t rows() const { return rows_; }
  int nodes() const { return nodes_; }
  int k() const { return k_; }
  std::uint8_t operator()(std::uint64_t s, int v) const { return values_[s * nodes_ + v]; }
  std::uint8_t& operator()(std::uint64_t s, int v) { return values_[s * nodes_ + v]; }
  const std::vector<std::uint8_t>& values() const { return values_; }

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::uint64_t rows_;
  int nodes_;
  int k_;
  std::vector<std::uint8_t> values_;
};

// Ancestral sampling. `threads` = 0 uses the hardware concurrency; the result
// does not depend on it.
SampleMatrix sample_clean(const TreeModel& model, std::uint64_t count, std::uint64_t seed,
                          unsigned threads = 1);

// Independently per cell, with probability q_v replace the symbol by a
// uniform draw over all k symbols (possibly the same one).
SampleMatrix apply_noise(const SampleMatrix& samples, const NoiseSpec& noise, std::uint64_t seed,
                         unsigned threads = 1);

PairwisePmfSet empirical_pairwise(const SampleMatrix& samples, int k);

}  // namespace noisytree
