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

#include "noisytree/model.hpp"

#include <cmath>
#include <sstream>

#include "noisytree/metric.hpp"
#include "noisytree/oracle.hpp"

namespace noisytree {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kSingularTol = 1e-12;

void check_support(int k) {
  if (k < 2 || k > kMaxSupport) {
    throw InvalidArgument("support size must be in [2, " + std::to_string(kMaxSupport) + "]");
  }
}

}  // namespace

TreeModel::TreeModel(Tree tree, int k, int root, Vector root_marginal, std::vector<Matrix> conditionals)
    : tree_(std::move(tree)), k_(k), root_(root), root_marginal_(std::move(root_marginal)) {
  check_support(k);
  const int n = tree_.size();
  if (root < 0 || root >= n) throw InvalidArgument("root out of range");
  if (root_marginal_.size() != k) throw InvalidArgument("root marginal must have k entries");
  if ((root_marginal_.array() < 0.0).any() || std::abs(root_marginal_.sum() - 1.0) > kStochasticTol) {
    throw InvalidArgument("root marginal is not a probability vector");
  }
  if (static_cast<int>(conditionals.size()) != n) {
    throw InvalidArgument("need one conditional slot per node");
  }
  std::tie(parent_, order_) = tree_.rooted(root);
  conditionals_ = std::move(conditionals);
  for (int v = 0; v < n; ++v) {
    if (v == root) {
      conditionals_[v] = Matrix();
      continue;
    }
    const Matrix& m = conditionals_[v];
    if (m.rows() != k || m.cols() != k) {
      throw InvalidArgument("conditional of node " + std::to_string(v) + " must be k x k");
    }
    if ((m.array() < 0.0).any()) {
      throw InvalidArgument("conditional of node " + std::to_string(v) + " has a negative entry");
    }
    const Vector column_sums = m.colwise().sum().transpose();
    if (((column_sums.array() - 1.0).abs() > kStochasticTol).any()) {
      throw InvalidArgument("conditional of node " + std::to_string(v) + " is not column-stochastic");
    }
    if (!(abs_det(m) > kSingularTol)) {
      throw InvalidArgument("conditional of node " + std::to_string(v) + " is singular");
    }
  }
}

const Matrix& TreeModel::conditional(int v) const {
  if (v == root_) throw InvalidArgument("the root has no conditional");
  return conditionals_.at(v);
}

void NoiseSpec::validate() const {
  if (!(q_max >= 0.0 && q_max < 1.0)) throw InvalidArgument("q_max must lie in [0, 1)");
  for (double qi : q) {
    if (!(qi >= 0.0 && qi <= q_max)) throw InvalidArgument("every q_i must lie in [0, q_max]");
  }
}

void AlgoParams::validate(int k) const {
  if (!(d_min > 0.0 && d_min < d_max)) throw InvalidArgument("need 0 < d_min < d_max");
  if (!(q_max >= 0.0 && q_max < 1.0)) throw InvalidArgument("q_max must lie in [0, 1)");
  if (!(p_min > 0.0 && p_min <= 1.0 / k + 1e-15)) throw InvalidArgument("need 0 < p_min <= 1/k");
  if (t0 && !(*t0 > 0.0)) throw InvalidArgument("t0 must be positive");
  if (!(neighborhood_multiplier > 0.0)) throw InvalidArgument("neighborhood multiplier must be positive");
}

Matrix symmetric_conditional(int k, double alpha) {
  check_support(k);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  Matrix m = Matrix::Constant(k, k, (1.0 - alpha) / k);
  m.diagonal().array() += alpha;
  return m;
}

Matrix perturbed_conditional(int k, double alpha, double delta, int offset) {
  check_support(k);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (offset <= 0 || offset >= k) throw InvalidArgument("offset must satisfy 0 < c < k");
  Matrix m = Matrix::Constant(k, k, (1.0 - alpha) / k);
  m.diagonal().array() += alpha - delta;
  for (int i = 0; i < k; ++i) m(i, (i + offset) % k) += delta;
  if ((m.array() < 0.0).any() || (m.array() > 1.0).any()) {
    std::ostringstream msg;
    msg << "perturbed conditional (alpha=" << alpha << ", delta=" << delta
        << ") has entries outside [0, 1]";
    throw InvalidArgument(msg.str());
  }
  return m;
}

namespace {

TreeModel uniform_root_model(const Tree& tree, int k, int root, const std::vector<Matrix>& per_edge) {
  const auto [parent, order] = tree.rooted(root);
  std::vector<Matrix> conditionals(tree.size());
  const auto& edges = tree.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    const int child = parent[a] == b ? a : b;
    conditionals[child] = per_edge[e];
  }
  return TreeModel(tree, k, root, Vector::Constant(k, 1.0 / k), std::move(conditionals));
}

}  // namespace

TreeModel build_symmetric_model(const Tree& tree, int k, const std::vector<double>& alphas,
                                std::optional<DistanceBounds> bounds, int root) {
  check_support(k);
  if (alphas.size() != tree.edges().size()) throw InvalidArgument("need one alpha per edge");
  std::vector<Matrix> per_edge;
  per_edge.reserve(alphas.size());
  for (double alpha : alphas) {
    if (bounds) {
      const double lo = std::exp(-bounds->d_max / (k - 1));
      const double hi = std::exp(-bounds->d_min / (k - 1));
      if (!(alpha > lo && alpha < hi)) {
        throw InvalidArgument("alpha outside the range implied by the distance bounds");
      }
    }
    per_edge.push_back(symmetric_conditional(k, alpha));
  }
  return uniform_root_model(tree, k, root, per_edge);
}

TreeModel build_perturbed_symmetric_model(const Tree& tree, int k, const std::vector<PerturbedEdge>& edges,
                                          int root) {
  check_support(k);
  if (edges.size() != tree.edges().size()) throw InvalidArgument("need one parameter set per edge");
  std::vector<Matrix> per_edge;
  per_edge.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.delta == 0.0) {
      per_edge.push_back(symmetric_conditional(k, e.alpha));
    } else {
      if (e.alpha == e.delta) throw InvalidArgument("perturbed edge needs alpha != delta");
      per_edge.push_back(perturbed_conditional(k, e.alpha, e.delta, e.offset));
    }
  }
  return uniform_root_model(tree, k, root, per_edge);
}

double alpha_for_distance(int k, double distance, double delta, int offset) {
  check_support(k);
  if (!(distance > 0.0)) throw InvalidArgument("distance must be positive");
  if (delta == 0.0) return std::exp(-distance / (k - 1));
  // With uniform marginals the information distance is -log|det M|.
  const auto edge_distance = [&](double alpha) {
    Matrix m = Matrix::Constant(k, k, (1.0 - alpha) / k);
    m.diagonal().array() += alpha - delta;
    for (int i = 0; i < k; ++i) m(i, (i + offset) % k) += delta;
    return -log_abs_det(m);
  };
  double lo = std::max(2.0 * std::abs(delta), 1e-9);
  double hi = 1.0 - 1e-12;
  if (!(edge_distance(lo) >= distance && edge_distance(hi) <= distance)) {
    throw InvalidArgument("no alpha reaches the requested distance for this delta");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (edge_distance(mid) > distance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<AssumptionViolation> validate_assumptions(const TreeModel& model, const NoiseSpec& noise,
                                                      const AlgoParams& params) {
  std::vector<AssumptionViolation> out;
  const auto marginals = exact_marginals(model);
  for (int v = 0; v < model.size(); ++v) {
    for (int s = 0; s < model.k(); ++s) {
      if (marginals[v](s) < params.p_min - 1e-12) {
        std::ostringstream msg;
        msg << "node " << v << " symbol " << s << " has mass " << marginals[v](s) << " < p_min "
            << params.p_min;
        out.push_back({1, msg.str()});
      }
    }
  }
  for (const auto& [a, b] : model.tree().edges()) {
    const Matrix joint = exact_pairwise_pmf(model, a, b);
    const double d = info_distance(joint, marginals[a], marginals[b]);
    if (!(d > params.d_min && d < params.d_max)) {
      std::ostringstream msg;
      msg << "edge (" << a << ", " << b << ") has distance " << d << " outside (" << params.d_min << ", "
          << params.d_max << ")";
      out.push_back({2, msg.str()});
    }
  }
  for (std::size_t v = 0; v < noise.q.size(); ++v) {
    if (noise.q[v] > params.q_max) {
      std::ostringstream msg;
      msg << "node " << v << " has q = " << noise.q[v] << " > q_max " << params.q_max;
      out.push_back({3, msg.str()});
    }
  }
  return out;
}

}  // namespace noisytree
