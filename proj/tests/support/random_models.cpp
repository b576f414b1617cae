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

#include "random_models.hpp"

#include <algorithm>

#include "noisytree/metric.hpp"

namespace noisytree::testkit {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

namespace {

Vector dirichlet(int k, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  Vector v(k);
  for (int i = 0; i < k; ++i) v(i) = g(rng) + 1e-12;
  return v / v.sum();
}

}  // namespace

Matrix random_conditional(int k, std::mt19937_64& rng, double beta_lo, double beta_hi) {
  const double beta = uniform(rng, beta_lo, beta_hi);
  Matrix m(k, k);
  for (int col = 0; col < k; ++col) m.col(col) = dirichlet(k, rng);
  m *= 1.0 - beta;
  m.diagonal().array() += beta;
  return m;
}

Vector random_marginal(int k, std::mt19937_64& rng, double floor_mass) {
  return Vector::Constant(k, floor_mass) + (1.0 - k * floor_mass) * dirichlet(k, rng);
}

TreeModel random_model(const Tree& tree, int k, std::mt19937_64& rng, double beta_lo, double beta_hi) {
  std::vector<Matrix> conditionals(tree.size());
  for (int v = 1; v < tree.size(); ++v) conditionals[v] = random_conditional(k, rng, beta_lo, beta_hi);
  return TreeModel(tree, k, 0, random_marginal(k, rng), std::move(conditionals));
}

NoiseSpec random_noise(int n, double q_max, std::mt19937_64& rng) {
  NoiseSpec noise{std::vector<double>(n), q_max};
  for (auto& q : noise.q) q = uniform(rng, 0.0, q_max);
  return noise;
}

AlgoParams population_params(const TreeModel& model, const NoiseSpec& noise, double margin) {
  const auto marginals = exact_marginals(model);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (auto [a, b] : model.tree().edges()) {
    const double d = info_distance(exact_pairwise_pmf(model, a, b), marginals[a], marginals[b]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  double mass = 1.0;
  for (const auto& m : marginals) mass = std::min(mass, m.minCoeff());
  AlgoParams p;
  p.d_min = lo * (1.0 - margin);
  p.d_max = hi * (1.0 + margin);
  p.q_max = noise.q_max;
  p.p_min = std::min(mass, 1.0 / model.k());
  return p;
}

}  // namespace noisytree::testkit
