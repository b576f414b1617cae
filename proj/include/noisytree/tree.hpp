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
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace noisytree {

using Edge = std::pair<int, int>;

// Undirected tree on nodes 0..n-1. Edges are stored normalized (smaller
// endpoint first) and sorted, so two trees on the same node set compare
// equal iff they have the same edge set.
class Tree {
 public:
  Tree() = default;
  // Throws InvalidArgument unless the edges form a spanning tree on n nodes.
  Tree(int n, std::vector<Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }
  int degree(int v) const { return static_cast<int>(adjacency_.at(v).size()); }
  bool is_leaf(int v) const { return degree(v) == 1; }
  bool has_edge(int a, int b) const;

  // Nodes on the unique path from `from` to `to`, both endpoints included.
  std::vector<int> path(int from, int to) const;

  // Parent of every node when the tree is rooted at `root` (-1 for the root)
  // together with a breadth-first visiting order.
  std::pair<std::vector<int>, std::vector<int>> rooted(int root) const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

Tree chain_tree(int n);
Tree star_tree(int n, int hub = 0);

// Decodes a Prüfer sequence of length n-2 (n >= 2).
Tree tree_from_prufer(std::span<const int> sequence, int n);

// Uniform over labeled trees on n nodes.
Tree random_tree(int n, std::mt19937_64& rng);

// Every labeled tree on n nodes (n^(n-2) of them); n <= 8.
std::vector<Tree> all_labeled_trees(int n);

// Relabels node v as perm[v].
Tree relabel(const Tree& tree, std::span<const int> perm);

}  // namespace noisytree
