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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "noisytree/linalg.hpp"
#include "noisytree/tree.hpp"

using namespace noisytree;

TEST(Tree, RejectsWrongEdgeCount) {
  EXPECT_THROW(Tree(3, {{0, 1}}), InvalidArgument);
  EXPECT_THROW(Tree(0, {}), InvalidArgument);
}

TEST(Tree, RejectsSelfLoopDuplicateAndCycle) {
  EXPECT_THROW(Tree(3, {{0, 0}, {1, 2}}), InvalidArgument);
  EXPECT_THROW(Tree(3, {{0, 1}, {1, 0}}), InvalidArgument);
  // Four edges on four nodes would be needed for a cycle; a disconnected
  // graph with a triangle and an isolated node has the right count.
  EXPECT_THROW(Tree(4, {{0, 1}, {1, 2}, {0, 2}}), InvalidArgument);
  EXPECT_THROW(Tree(3, {{0, 5}, {1, 2}}), InvalidArgument);
}

TEST(Tree, NormalizesEdges) {
  const Tree t(3, {{2, 1}, {1, 0}});
  EXPECT_EQ(t.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(t.has_edge(2, 1));
  EXPECT_FALSE(t.has_edge(0, 2));
  EXPECT_EQ(t.degree(1), 2);
  EXPECT_TRUE(t.is_leaf(0));
}

TEST(Tree, PathAndRooting) {
  const Tree t = chain_tree(5);
  EXPECT_EQ(t.path(0, 3), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(t.path(4, 2), (std::vector<int>{4, 3, 2}));
  const auto [parent, order] = t.rooted(2);
  EXPECT_EQ(parent[2], -1);
  EXPECT_EQ(parent[0], 1);
  EXPECT_EQ(order.front(), 2);
}

TEST(Tree, StarAndPrufer) {
  const Tree s = star_tree(5, 0);
  EXPECT_EQ(s.degree(0), 4);
  const std::vector<int> seq{3, 3, 3};
  EXPECT_EQ(tree_from_prufer(seq, 5), star_tree(5, 3));
}

TEST(Tree, AllLabeledTreesMatchesCayley) {
  for (int n = 2; n <= 6; ++n) {
    const auto trees = all_labeled_trees(n);
    int expected = 1;
    for (int i = 0; i < n - 2; ++i) expected *= n;
    EXPECT_EQ(static_cast<int>(trees.size()), expected);
    std::set<std::vector<Edge>> distinct;
    for (const auto& t : trees) distinct.insert(t.edges());
    EXPECT_EQ(distinct.size(), trees.size());
  }
}

TEST(Tree, RandomTreeIsDeterministic) {
  std::mt19937_64 a(7);
  std::mt19937_64 b(7);
  EXPECT_EQ(random_tree(9, a), random_tree(9, b));
}

TEST(Tree, Relabel) {
  const std::vector<int> perm{1, 0, 2};
  EXPECT_EQ(relabel(chain_tree(3), perm), Tree(3, {{0, 1}, {0, 2}}));
}
