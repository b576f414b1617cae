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

#include "noisytree/tree.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

#include "noisytree/linalg.hpp"

namespace noisytree {

Tree::Tree(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw InvalidArgument("tree needs at least one node");
  if (static_cast<int>(edges.size()) != n - 1) {
    throw InvalidArgument("tree on " + std::to_string(n) + " nodes needs " + std::to_string(n - 1) +
                          " edges, got " + std::to_string(edges.size()));
  }
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidArgument("edge endpoint out of range");
    if (a == b) throw InvalidArgument("self-loop on node " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InvalidArgument("duplicate edge");
  }
  edges_ = std::move(edges);
  adjacency_.assign(n, {});
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  // n-1 edges + connected => acyclic.
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n) throw InvalidArgument("edges do not form a connected tree");
}

bool Tree::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::pair<std::vector<int>, std::vector<int>> Tree::rooted(int root) const {
  if (root < 0 || root >= n_) throw InvalidArgument("root out of range");
  std::vector<int> parent(n_, -1);
  std::vector<int> order;
  order.reserve(n_);
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(root);
  seen[root] = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    order.push_back(v);
    for (int w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        frontier.push(w);
      }
    }
  }
  return {std::move(parent), std::move(order)};
}

std::vector<int> Tree::path(int from, int to) const {
  const auto [parent, order] = rooted(to);
  std::vector<int> out{from};
  for (int v = from; v != to; v = parent[v]) out.push_back(parent[v]);
  return out;
}

Tree chain_tree(int n) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Tree(n, std::move(edges));
}

Tree star_tree(int n, int hub) {
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) {
    if (v != hub) edges.emplace_back(hub, v);
  }
  return Tree(n, std::move(edges));
}

Tree tree_from_prufer(std::span<const int> sequence, int n) {
  if (n < 2 || static_cast<int>(sequence.size()) != n - 2) {
    throw InvalidArgument("Prüfer sequence must have length n-2");
  }
  std::vector<int> degree(n, 1);
  for (int v : sequence) {
    if (v < 0 || v >= n) throw InvalidArgument("Prüfer entry out of range");
    ++degree[v];
  }
  std::set<int> leaves;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.insert(v);
  }
  std::vector<Edge> edges;
  for (int v : sequence) {
    const int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, v);
    if (--degree[v] == 1) leaves.insert(v);
  }
  const int a = *leaves.begin();
  const int b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return Tree(n, std::move(edges));
}

Tree random_tree(int n, std::mt19937_64& rng) {
  if (n == 1) return Tree(1, {});
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> sequence(n - 2);
  for (auto& v : sequence) v = pick(rng);
  return tree_from_prufer(sequence, n);
}

std::vector<Tree> all_labeled_trees(int n) {
  if (n < 1 || n > 8) throw InvalidArgument("all_labeled_trees supports 1 <= n <= 8");
  if (n == 1) return {Tree(1, {})};
  if (n == 2) return {Tree(2, {{0, 1}})};
  std::vector<Tree> out;
  std::vector<int> sequence(n - 2, 0);
  while (true) {
    out.push_back(tree_from_prufer(sequence, n));
    int pos = n - 3;
    while (pos >= 0 && sequence[pos] == n - 1) sequence[pos--] = 0;
    if (pos < 0) break;
    ++sequence[pos];
  }
  return out;
}

Tree relabel(const Tree& tree, std::span<const int> perm) {
  std::vector<Edge> edges;
  for (const auto& [a, b] : tree.edges()) edges.emplace_back(perm[a], perm[b]);
  return Tree(tree.size(), std::move(edges));
}

}  // namespace noisytree
