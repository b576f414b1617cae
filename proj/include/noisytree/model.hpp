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
#include <optional>
#include <string>
#include <vector>

#include "noisytree/linalg.hpp"
#include "noisytree/tree.hpp"

namespace noisytree {

// Ground-truth tree-structured distribution over n variables with common
// support size k. The tree is rooted at `root` and every non-root node v
// carries conditional(v)(a, b) = P(X_v = a | X_parent(v) = b), which is
// column-stochastic.
class TreeModel {
 public:
  // `conditionals[v]` is ignored for the root. Throws InvalidArgument when
  // the marginal or any conditional is invalid or singular (|det| <= 1e-12).
  TreeModel(Tree tree, int k, int root, Vector root_marginal, std::vector<Matrix> conditionals);

  const Tree& tree() const { return tree_; }
  int size() const { return tree_.size(); }
  int k() const { return k_; }
  int root() const { return root_; }
  const Vector& root_marginal() const { return root_marginal_; }
  int parent(int v) const { return parent_.at(v); }
  const std::vector<int>& parents() const { return parent_; }
  // Breadth-first order from the root.
  const std::vector<int>& order() const { return order_; }
  const Matrix& conditional(int v) const;

 private:
  Tree tree_;
  int k_;
  int root_;
  Vector root_marginal_;
  std::vector<int> parent_;
  std::vector<int> order_;
  std::vector<Matrix> conditionals_;
};

// Per-node probability that the k-ary symmetric channel replaces the symbol
// by a uniform draw over all k symbols.
struct NoiseSpec {
  std::vector<double> q;
  double q_max = 0.0;

  static NoiseSpec none(int n) { return {std::vector<double>(n, 0.0), 0.0}; }
  // Throws InvalidArgument unless 0 <= q_i <= q_max < 1.
  void validate() const;
};

struct AlgoParams {
  double d_min = 0.0;
  double d_max = 0.0;
  double q_max = 0.0;
  double p_min = 0.0;
  std::optional<double> t0;
  // Residual below which a center test counts as solved when t0 is unknown.
  double root_tol = 1e-6;
  // Neighborhood threshold is multiplier * (4 d_max + 3 eta_max).
  double neighborhood_multiplier = 1.0;
  // Pick the first r of the leaf-parent walk at random (seeded) instead of
  // the lowest-index active node.
  bool randomize_init = false;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on 0 < d_min < d_max, 0 <= q_max < 1,
  // 0 < p_min <= 1/k, t0 > 0 violations.
  void validate(int k) const;
};

// Conditional matrix alpha I + (1 - alpha) O / k.
Matrix symmetric_conditional(int k, double alpha);

// (alpha - delta) I + (1 - alpha) O / k + Delta, where Delta holds delta at
// (i, (i + offset) mod k) in 0-indexed terms (the 1-indexed column
// ((i - 1 + c) mod k) + 1). Throws when an entry leaves [0, 1].
Matrix perturbed_conditional(int k, double alpha, double delta, int offset);

struct DistanceBounds {
  double d_min;
  double d_max;
};

// Uniform root marginal, every edge alpha I + (1 - alpha) O / k. `alphas` is
// indexed like tree.edges(). When `bounds` is given each alpha must satisfy
// exp(-d_max/(k-1)) < alpha < exp(-d_min/(k-1)).
TreeModel build_symmetric_model(const Tree& tree, int k, const std::vector<double>& alphas,
                                std::optional<DistanceBounds> bounds = std::nullopt, int root = 0);

struct PerturbedEdge {
  double alpha;
  double delta;
  int offset;
};

TreeModel build_perturbed_symmetric_model(const Tree& tree, int k,
                                          const std::vector<PerturbedEdge>& edges, int root = 0);

// Alpha of a perturbed edge whose information distance (under uniform
// marginals) equals `distance`; delta = 0 gives exp(-distance/(k-1)).
double alpha_for_distance(int k, double distance, double delta = 0.0, int offset = 1);

struct AssumptionViolation {
  int assumption;  // 1: marginal mass, 2: edge distance, 3: noise bound
  std::string message;
};

// Empty iff every node/symbol has mass >= p_min, every edge distance lies in
// (d_min, d_max) and every q_i <= q_max.
std::vector<AssumptionViolation> validate_assumptions(const TreeModel& model, const NoiseSpec& noise,
                                                      const AlgoParams& params);

}  // namespace noisytree
