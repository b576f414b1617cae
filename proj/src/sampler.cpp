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

#include "noisytree/sampler.hpp"

#include <algorithm>
#include <thread>

#include "noisytree/rng.hpp"

namespace noisytree {

namespace {

enum Stream : std::uint64_t { kAncestral = 1, kNoiseFlip = 2, kNoiseSymbol = 3 };

template <typename Fn>
void parallel_rows(std::uint64_t rows, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1 || rows < 4096) {
    fn(std::uint64_t{0}, rows);
    return;
  }
  const std::uint64_t chunk = (rows + threads - 1) / threads;
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(rows, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

// Inverse-CDF draw from column `col` of a column-stochastic matrix.
int draw_from(const Matrix& m, int col, double u) {
  const int k = static_cast<int>(m.rows());
  double acc = 0.0;
  for (int a = 0; a < k - 1; ++a) {
    acc += m(a, col);
    if (u < acc) return a;
  }
  return k - 1;
}

int draw_from(const Vector& p, double u) {
  const int k = static_cast<int>(p.size());
  double acc = 0.0;
  for (int a = 0; a < k - 1; ++a) {
    acc += p(a);
    if (u < acc) return a;
  }
  return k - 1;
}

}  // namespace

SampleMatrix::SampleMatrix(std::uint64_t rows, int nodes, int k)
    : SampleMatrix(rows, nodes, k, std::vector<std::uint8_t>(rows * static_cast<std::uint64_t>(nodes), 0)) {}

SampleMatrix::SampleMatrix(std::uint64_t rows, int nodes, int k, std::vector<std::uint8_t> values)
    : rows_(rows), nodes_(nodes), k_(k), values_(std::move(values)) {
  if (nodes < 1) throw InvalidArgument("sample matrix needs at least one node");
  if (k < 2 || k > kMaxSupport) throw InvalidArgument("support size out of range");
  if (values_.size() != rows * static_cast<std::uint64_t>(nodes)) {
    throw InvalidArgument("sample buffer has the wrong size");
  }
  if (std::any_of(values_.begin(), values_.end(), [k](std::uint8_t s) { return s >= k; })) {
    throw InvalidArgument("sample symbol outside [0, k)");
  }
}

SampleMatrix sample_clean(const TreeModel& model, std::uint64_t count, std::uint64_t seed, unsigned threads) {
  if (count < 1) throw InvalidArgument("need at least one sample");
  const int n = model.size();
  SampleMatrix out(count, n, model.k());
  parallel_rows(count, threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t s = begin; s < end; ++s) {
      for (int v : model.order()) {
        const double u = counter_uniform(seed, kAncestral, v, s);
        const int symbol = v == model.root() ? draw_from(model.root_marginal(), u)
                                             : draw_from(model.conditional(v), out(s, model.parent(v)), u);
        out(s, v) = static_cast<std::uint8_t>(symbol);
      }
    }
  });
  return out;
}

SampleMatrix apply_noise(const SampleMatrix& samples, const NoiseSpec& noise, std::uint64_t seed,
                         unsigned threads) {
  const int n = samples.nodes();
  const int k = samples.k();
  if (static_cast<int>(noise.q.size()) != n) throw InvalidArgument("noise needs one q per node");
  SampleMatrix out = samples;
  parallel_rows(samples.rows(), threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t s = begin; s < end; ++s) {
      for (int v = 0; v < n; ++v) {
        if (noise.q[v] == 0.0) continue;
        if (counter_uniform(seed, kNoiseFlip, v, s) < noise.q[v]) {
          const auto symbol = static_cast<int>(counter_uniform(seed, kNoiseSymbol, v, s) * k);
          out(s, v) = static_cast<std::uint8_t>(std::min(symbol, k - 1));
        }
      }
    }
  });
  return out;
}

PairwisePmfSet empirical_pairwise(const SampleMatrix& samples, int k) {
  const int n = samples.nodes();
  const std::uint64_t rows = samples.rows();
  if (rows < 1) throw InvalidArgument("need at least one sample");
  if (k != samples.k()) throw InvalidArgument("support size does not match the samples");
  const int pairs = PairwisePmfSet::pair_count(n);
  std::vector<std::vector<std::uint64_t>> counts(pairs, std::vector<std::uint64_t>(k * k, 0));
  const std::uint8_t* data = samples.values().data();
  for (std::uint64_t s = 0; s < rows; ++s) {
    const std::uint8_t* row = data + s * n;
    int p = 0;
    for (int i = 0; i < n; ++i) {
      const int base = row[i] * k;
      for (int j = i + 1; j < n; ++j) ++counts[p++][base + row[j]];
    }
  }
  std::vector<Matrix> mats;
  mats.reserve(pairs);
  const double inv = 1.0 / static_cast<double>(rows);
  for (const auto& c : counts) {
    Matrix m(k, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) m(a, b) = static_cast<double>(c[a * k + b]) * inv;
    }
    mats.push_back(std::move(m));
  }
  return PairwisePmfSet(n, k, PmfSource::kEmpirical, rows, std::move(mats));
}

}  // namespace noisytree
