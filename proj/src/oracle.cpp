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

#include "noisytree/oracle.hpp"

#include <cmath>
#include <string>

namespace noisytree {

PairwisePmfSet::PairwisePmfSet(int n, int k, PmfSource source, std::uint64_t sample_count,
                               std::vector<Matrix> pairs)
    : n_(n), k_(k), source_(source), sample_count_(sample_count), pairs_(std::move(pairs)) {
  if (n < 2) throw InvalidArgument("a pairwise PMF set needs at least two nodes");
  if (k < 2 || k > kMaxSupport) throw InvalidArgument("support size out of range");
  if (static_cast<int>(pairs_.size()) != pair_count(n)) {
    throw InvalidArgument("expected " + std::to_string(pair_count(n)) + " pair matrices");
  }
  for (const auto& m : pairs_) {
    if (m.rows() != k || m.cols() != k) throw InvalidArgument("pair matrices must be k x k");
    if ((m.array() < 0.0).any()) throw InvalidArgument("pair matrix has a negative entry");
    if (std::abs(m.sum() - 1.0) > 1e-9) throw InvalidArgument("pair matrix does not sum to 1");
  }
  marginals_.reserve(n);
  for (int i = 0; i < n; ++i) {
    marginals_.push_back(joint(i, i == 0 ? 1 : 0).rowwise().sum());
  }
}

int PairwisePmfSet::pair_index(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) throw InvalidArgument("invalid node pair");
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

Matrix PairwisePmfSet::joint(int i, int j) const {
  const Matrix& m = pairs_[pair_index(i, j)];
  if (i < j) return m;
  return m.transpose();
}

std::vector<Vector> exact_marginals(const TreeModel& model) {
  std::vector<Vector> out(model.size());
  for (int v : model.order()) {
    if (v == model.root()) {
      out[v] = model.root_marginal();
    } else {
      out[v] = model.conditional(v) * out[model.parent(v)];
    }
  }
  return out;
}

Vector exact_marginal(const TreeModel& model, int i) {
  if (i < 0 || i >= model.size()) throw InvalidArgument("node out of range");
  // Walk root -> i and push the root marginal through each edge.
  const auto path = model.tree().path(model.root(), i);
  Vector m = model.root_marginal();
  for (std::size_t s = 1; s < path.size(); ++s) m = model.conditional(path[s]) * m;
  return m;
}

Matrix path_conditional(const TreeModel& model, const std::vector<Vector>& marginals, int i, int j) {
  const int k = model.k();
  const auto path = model.tree().path(i, j);
  Matrix acc = Matrix::Identity(k, k);
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const int from = path[s];
    const int to = path[s + 1];
    Matrix step(k, k);
    if (model.parent(to) == from) {
      step = model.conditional(to);
    } else {
      // Upward step: P(to = a | from = b) = P(from = b | to = a) P(to = a) / P(from = b).
      const Matrix& down = model.conditional(from);
      for (int b = 0; b < k; ++b) {
        const double denom = marginals[from](b);
        if (denom == 0.0) {
          throw SingularMatrixError("zero marginal entry while inverting edge (" + std::to_string(to) + ", " +
                                        std::to_string(from) + ")",
                                    to, from);
        }
        for (int a = 0; a < k; ++a) step(a, b) = down(b, a) * marginals[to](a) / denom;
      }
    }
    acc = step * acc;
  }
  return acc;
}

Matrix exact_pairwise_pmf(const TreeModel& model, int i, int j) {
  if (i == j) throw InvalidArgument("exact_pairwise_pmf needs two distinct nodes");
  const auto marginals = exact_marginals(model);
  const Matrix cond = path_conditional(model, marginals, i, j);
  return marginals[i].asDiagonal() * cond.transpose();
}

Matrix noisy_pairwise_pmf(const TreeModel& model, const NoiseSpec& noise, int i, int j) {
  const int k = model.k();
  return error_matrix(k, noise.q.at(i)) * exact_pairwise_pmf(model, i, j) * error_matrix(k, noise.q.at(j));
}

namespace {

PairwisePmfSet assemble(const TreeModel& model, const NoiseSpec* noise) {
  const int n = model.size();
  const int k = model.k();
  const auto marginals = exact_marginals(model);
  std::vector<Matrix> pairs;
  pairs.reserve(PairwisePmfSet::pair_count(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Matrix p = marginals[i].asDiagonal() * path_conditional(model, marginals, i, j).transpose();
      if (noise != nullptr) p = error_matrix(k, noise->q[i]) * p * error_matrix(k, noise->q[j]);
      pairs.push_back(std::move(p));
    }
  }
  return PairwisePmfSet(n, k, PmfSource::kExact, 0, std::move(pairs));
}

}  // namespace

PairwisePmfSet exact_pairwise_set(const TreeModel& model) { return assemble(model, nullptr); }

PairwisePmfSet exact_pairwise_set(const TreeModel& model, const NoiseSpec& noise) {
  if (static_cast<int>(noise.q.size()) != model.size()) throw InvalidArgument("noise needs one q per node");
  noise.validate();
  return assemble(model, &noise);
}

std::vector<double> brute_force_joint(const TreeModel& model) {
  const int n = model.size();
  const int k = model.k();
  double cells = std::pow(static_cast<double>(k), n);
  if (cells > 1e7) throw InvalidArgument("brute_force_joint limited to k^n <= 1e7");
  const auto total = static_cast<std::size_t>(cells);
  std::vector<double> table(total);
  std::vector<int> x(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int v = 0; v < n; ++v) {
      x[v] = static_cast<int>(rest % k);
      rest /= k;
    }
    double p = model.root_marginal()(x[model.root()]);
    for (int v = 0; v < n; ++v) {
      if (v != model.root()) p *= model.conditional(v)(x[v], x[model.parent(v)]);
    }
    table[idx] = p;
  }
  return table;
}

Matrix marginalize_pair(const std::vector<double>& joint, int n, int k, int i, int j) {
  Matrix out = Matrix::Zero(k, k);
  std::size_t stride_i = 1;
  std::size_t stride_j = 1;
  for (int v = 0; v < i; ++v) stride_i *= k;
  for (int v = 0; v < j; ++v) stride_j *= k;
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    out((idx / stride_i) % k, (idx / stride_j) % k) += joint[idx];
  }
  (void)n;
  return out;
}

}  // namespace noisytree
