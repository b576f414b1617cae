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

#include "noisytree/evalkit.hpp"

#include <algorithm>
#include <numeric>

#include "noisytree/quadtest.hpp"

namespace noisytree {

LeafClusterSet leaf_clusters(const Tree& tree) {
  const int n = tree.size();
  if (n < 2) throw InvalidArgument("leaf clusters need at least two nodes");
  LeafClusterSet out;
  out.group.resize(n);
  std::iota(out.group.begin(), out.group.end(), 0);
  if (n == 2) {
    out.clusters = {{0, 1}};
    out.group = {0, 0};
    return out;
  }
  for (int p = 0; p < n; ++p) {
    if (tree.is_leaf(p)) continue;
    std::vector<int> members{p};
    for (int w : tree.neighbors(p)) {
      if (tree.is_leaf(w)) members.push_back(w);
    }
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    for (int v : members) out.group[v] = members[0];
    out.clusters.push_back(std::move(members));
  }
  std::sort(out.clusters.begin(), out.clusters.end());
  for (const auto& [a, b] : tree.edges()) {
    const int ga = out.group[a];
    const int gb = out.group[b];
    if (ga != gb) out.quotient_edges.emplace_back(std::min(ga, gb), std::max(ga, gb));
  }
  std::sort(out.quotient_edges.begin(), out.quotient_edges.end());
  return out;
}

bool same_equivalence_class(const Tree& a, const Tree& b) {
  if (a.size() != b.size()) return false;
  if (a.size() == 1) return true;
  const auto ca = leaf_clusters(a);
  const auto cb = leaf_clusters(b);
  return ca.clusters == cb.clusters && ca.quotient_edges == cb.quotient_edges;
}

int cluster_hub(const Tree& tree, const std::vector<int>& members) {
  for (int v : members) {
    if (tree.degree(v) > 1) return v;
  }
  return *std::min_element(members.begin(), members.end());
}

bool in_t_sub(const Tree& truth, const std::vector<ClusterFlags>& truth_flags, const Tree& candidate) {
  if (!same_equivalence_class(truth, candidate)) return false;
  for (const auto& members : leaf_clusters(truth).clusters) {
    const int hub = cluster_hub(candidate, members);
    if (hub == cluster_hub(truth, members)) continue;
    const auto it = std::find_if(truth_flags.begin(), truth_flags.end(),
                                 [&](const ClusterFlags& f) { return f.members == members; });
    if (it == truth_flags.end()) return false;
    if (std::find(it->candidate_parents.begin(), it->candidate_parents.end(), hub) == it->candidate_parents.end()) {
      return false;
    }
  }
  return true;
}

namespace {

// Minimized leaf-as-center residual for every leaf of the true tree, keyed
// by leaf. A lone edge (n = 2) has no third node and yields nothing.
std::vector<std::pair<int, double>> leaf_residuals(const TreeModel& model, const NoiseSpec& noise, double q_max) {
  const Tree& tree = model.tree();
  const int n = tree.size();
  std::vector<std::pair<int, double>> out;
  if (n < 3) return out;
  const auto pmfs = exact_pairwise_set(model, noise);
  for (int leaf = 0; leaf < n; ++leaf) {
    if (!tree.is_leaf(leaf)) continue;
    const int parent = tree.neighbors(leaf)[0];
    double best = std::numeric_limits<double>::infinity();
    for (int third = 0; third < n; ++third) {
      if (third == leaf || third == parent) continue;
      try {
        const auto q = quad_coefficients(pmfs, parent, leaf, third);
        best = minimize_residual(q, 0.0, q_max).residual;
        break;
      } catch (const SingularMatrixError&) {
      }
    }
    out.emplace_back(leaf, best);
  }
  return out;
}

}  // namespace

std::vector<ClusterFlags> ground_truth_flags(const TreeModel& model, const NoiseSpec& noise, double q_max, double tol) {
  const Tree& tree = model.tree();
  const auto residuals = leaf_residuals(model, noise, q_max);
  std::vector<ClusterFlags> out;
  for (const auto& members : leaf_clusters(tree).clusters) {
    ClusterFlags flags;
    flags.members = members;
    const int hub = cluster_hub(tree, members);
    for (int v : members) {
      if (v == hub) {
        flags.candidate_parents.push_back(v);
        continue;
      }
      for (auto [leaf, residual] : residuals) {
        if (leaf == v && residual < tol) flags.candidate_parents.push_back(v);
      }
    }
    flags.determined = tree.size() >= 3;
    out.push_back(std::move(flags));
  }
  return out;
}

std::optional<double> population_t0(const TreeModel& model, const NoiseSpec& noise, double q_max, double fraction) {
  std::optional<double> gap;
  for (auto [leaf, residual] : leaf_residuals(model, noise, q_max)) {
    if (residual < 1e-8) continue;
    gap = gap ? std::min(*gap, residual) : residual;
  }
  if (gap) *gap *= fraction;
  return gap;
}

double mutual_information(const Matrix& joint) {
  const Vector rows = joint.rowwise().sum();
  const Vector cols = joint.colwise().sum().transpose();
  double mi = 0.0;
  for (Eigen::Index a = 0; a < joint.rows(); ++a) {
    for (Eigen::Index b = 0; b < joint.cols(); ++b) {
      const double p = joint(a, b);
      if (p > 0.0) mi += p * std::log(p / (rows(a) * cols(b)));
    }
  }
  return std::max(mi, 0.0);
}

Tree chow_liu(const PairwisePmfSet& pmfs) {
  const int n = pmfs.size();
  struct Weighted {
    double w;
    int a;
    int b;
  };
  std::vector<Weighted> candidates;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) candidates.push_back({mutual_information(pmfs.joint(a, b)), a, b});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Weighted& x, const Weighted& y) { return x.w > y.w; });
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&](int v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  std::vector<Edge> edges;
  for (const auto& c : candidates) {
    const int ra = find(c.a);
    const int rb = find(c.b);
    if (ra == rb) continue;
    root[ra] = rb;
    edges.emplace_back(c.a, c.b);
    if (static_cast<int>(edges.size()) == n - 1) break;
  }
  return Tree(n, std::move(edges));
}

TrialScore score_trial(const Tree& truth, const std::vector<ClusterFlags>& truth_flags, const Tree& candidate) {
  TrialScore s;
  s.exact = truth == candidate;
  s.eq_class = same_equivalence_class(truth, candidate);
  s.in_t_sub = s.eq_class && in_t_sub(truth, truth_flags, candidate);
  return s;
}

}  // namespace noisytree
