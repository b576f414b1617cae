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

#include "noisytree/linalg.hpp"
#include "noisytree/model.hpp"

namespace noisytree {

enum class PmfSource { kExact, kEmpirical };

// Joint PMF matrices for every unordered pair of nodes, stored with the
// smaller node index on the rows. This (plus n and k) is everything the
// structure learner sees.
class PairwisePmfSet {
 public:
  PairwisePmfSet(int n, int k, PmfSource source, std::uint64_t sample_count,
                 std::vector<Matrix> pairs);

  int size() const { return n_; }
  int k() const { return k_; }
  PmfSource source() const { return source_; }
  std::uint64_t sample_count() const { return sample_count_; }

  static int pair_count(int n) { return n * (n - 1) / 2; }
  // Position of {i, j} (i != j) in the stored order (0,1), (0,2), ..., (n-2,n-1).
  int pair_index(int i, int j) const;

  // Entry (a, b) = P(X_i = a, X_j = b), transposing the stored matrix when i > j.
  Matrix joint(int i, int j) const;
  const Matrix& stored(int pair) const { return pairs_.at(pair); }
  const std::vector<Matrix>& stored_pairs() const { return pairs_; }

  // Row sums of joint(i, j) for the first available j.
  const Vector& marginal(int i) const { return marginals_.at(i); }

 private:
  int n_;
  int k_;
  PmfSource source_;
  std::uint64_t sample_count_;
  std::vector<Matrix> pairs_;
  std::vector<Vector> marginals_;
};

std::vector<Vector> exact_marginals(const TreeModel& model);
Vector exact_marginal(const TreeModel& model, int i);

// P(X_j = b | X_i = a) as a matrix with rows b and columns a, obtained by
// multiplying edge conditionals (Bayes-inverted on upward steps) along the
// i -> j path. Throws SingularMatrixError when an inversion hits a zero
// marginal entry.
Matrix path_conditional(const TreeModel& model, const std::vector<Vector>& marginals, int i, int j);

Matrix exact_pairwise_pmf(const TreeModel& model, int i, int j);

// E_i P_ij E_j with E = (1 - q) I + (q / k) O.
Matrix noisy_pairwise_pmf(const TreeModel& model, const NoiseSpec& noise, int i, int j);

PairwisePmfSet exact_pairwise_set(const TreeModel& model);
PairwisePmfSet exact_pairwise_set(const TreeModel& model, const NoiseSpec& noise);

// Full joint table; entry at sum_v x_v k^v is P(X = x). Requires k^n <= 1e7.
std::vector<double> brute_force_joint(const TreeModel& model);

// Marginalizes a brute-force table onto nodes (i, j), rows indexed by X_i.
Matrix marginalize_pair(const std::vector<double>& joint, int n, int k, int i, int j);

}  // namespace noisytree
