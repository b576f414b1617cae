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

#include <cmath>

#include "noisytree/evalkit.hpp"
#include "noisytree/metric.hpp"
#include "noisytree/oracle.hpp"
#include "noisytree/recovery.hpp"
#include "random_models.hpp"

using namespace noisytree;

namespace {

std::array<double, 6> kappas(const std::array<double, 6>& d) {
  std::array<double, 6> out{};
  for (int e = 0; e < 6; ++e) out[e] = std::exp(-d[e]);
  return out;
}

// Median of three nodes in a tree: the node shared by all three paths.
int median(const Tree& t, int a, int b, int c) {
  const auto ab = t.path(a, b);
  const auto ac = t.path(a, c);
  const auto bc = t.path(b, c);
  for (int v : ab) {
    if (std::find(ac.begin(), ac.end(), v) != ac.end() && std::find(bc.begin(), bc.end(), v) != bc.end()) return v;
  }
  return -1;
}

bool is_leaf_parent(const Tree& t, LeafParent lp) { return t.has_edge(lp.leaf, lp.parent); }

AlgoParams symmetric_params(double d, double q_max, int k) {
  AlgoParams p;
  p.d_min = 0.95 * d;
  p.d_max = 1.05 * d;
  p.q_max = q_max;
  p.p_min = 1.0 / k;
  return p;
}

}  // namespace

TEST(Quartet, ChainIsNonStar) {
  // d12 d13 d14 d23 d24 d34 on chain 1-2-3-4 with unit edges
  const auto v = classify_quartet(kappas({1, 2, 3, 1, 2, 1}), std::exp(-0.5), {10, 11, 12, 13});
  ASSERT_EQ(v.kind, QuartetKind::kNonStar);
  EXPECT_EQ(v.partition[0], (std::array<int, 2>{10, 11}));
  EXPECT_EQ(v.partition[1], (std::array<int, 2>{12, 13}));
}

TEST(Quartet, StarIsStar) {
  EXPECT_EQ(classify_quartet(kappas({2, 2, 2, 2, 2, 2}), std::exp(-0.5)).kind, QuartetKind::kStar);
}

TEST(Quartet, OtherPairings) {
  // chain 1-3-2-4
  const auto v = classify_quartet(kappas({2, 1, 3, 1, 1, 2}), std::exp(-0.5));
  ASSERT_EQ(v.kind, QuartetKind::kNonStar);
  EXPECT_EQ(v.partition[0], (std::array<int, 2>{0, 2}));
}

TEST(Quartet, PerturbedWithinMargin) {
  std::mt19937_64 rng(1);
  const double d_min = 0.5;
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 6> d{1, 2, 3, 1, 2, 1};
    for (auto& x : d) x += testkit::uniform(rng, -0.2, 0.2) * d_min;
    EXPECT_EQ(classify_quartet(kappas(d), std::exp(-d_min)).kind, QuartetKind::kNonStar);
    std::array<double, 6> s{2, 2, 2, 2, 2, 2};
    for (auto& x : s) x += testkit::uniform(rng, -0.05, 0.05) * d_min;
    EXPECT_NE(classify_quartet(kappas(s), std::exp(-d_min)).kind, QuartetKind::kNonStar);
  }
}

TEST(Quartet, NonFiniteFails) {
  auto k = kappas({1, 2, 3, 1, 2, 1});
  k[3] = 0.0;
  EXPECT_EQ(classify_quartet(k, 0.5).kind, QuartetKind::kFail);
}

TEST(FindCenter, ChainWithTails) {
  const auto m = build_symmetric_model(chain_tree(7), 3, std::vector<double>(6, 0.6));
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, symmetric_params(-2 * std::log(0.6), 0.0, 3));
  EXPECT_EQ(find_center(ctx, {2, 3, 4}, {}), (std::vector<int>{3}));
  EXPECT_EQ(find_center(ctx, {4, 2, 3}, {}), (std::vector<int>{3}));
}

TEST(FindCenter, SameClusterKeepsBoth) {
  const auto m = build_symmetric_model(chain_tree(6), 3, std::vector<double>(5, 0.6));
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, symmetric_params(-2 * std::log(0.6), 0.0, 3));
  const auto c = find_center(ctx, {0, 1, 3}, {});
  EXPECT_GE(c.size(), 2u);
  EXPECT_NE(std::find(c.begin(), c.end(), 1), c.end());
}

TEST(FindCenter, NoOutsideNodeKeepsAll) {
  const auto m = build_symmetric_model(chain_tree(3), 3, {0.6, 0.6});
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, symmetric_params(-2 * std::log(0.6), 0.0, 3));
  EXPECT_EQ(find_center(ctx, {0, 1, 2}, {}), (std::vector<int>{0, 1, 2}));
}

TEST(FindCenter, NeverDropsTrueCenter) {
  std::mt19937_64 rng(3);
  for (int n = 4; n <= 6; ++n) {
    for (const auto& t : all_labeled_trees(n)) {
      const auto m = testkit::random_model(t, 2, rng);
      const auto noise = testkit::random_noise(n, 0.1, rng);
      const auto pmfs = exact_pairwise_set(m, noise);
      const RecoveryContext ctx(pmfs, testkit::population_params(m, noise));
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          for (int c = b + 1; c < n; ++c) {
            const int med = median(t, a, b, c);
            if (med != a && med != b && med != c) continue;
            const auto cand = find_center(ctx, {a, b, c}, {});
            ASSERT_NE(std::find(cand.begin(), cand.end(), med), cand.end())
                << "n=" << n << " triplet " << a << b << c;
          }
        }
      }
    }
  }
}

TEST(LeafClusterResolution, PerturbedPicksTrueParent) {
  const double alpha = alpha_for_distance(4, 0.7, 0.04, 1);
  const auto m = build_perturbed_symmetric_model(star_tree(5, 0), 4, std::vector<PerturbedEdge>(4, {alpha, 0.04, 1}));
  const NoiseSpec noise{{0.1, 0.05, 0.15, 0.0, 0.2}, 0.2};
  const auto pmfs = exact_pairwise_set(m, noise);
  const RecoveryContext ctx(pmfs, testkit::population_params(m, noise));
  const std::vector<char> active(5, 1);
  for (int leaf = 1; leaf < 5; ++leaf) {
    const auto lp = leaf_cluster_resolution(ctx, {leaf, 0}, {}, active);
    EXPECT_EQ(lp.parent, 0);
    EXPECT_EQ(lp.leaf, leaf);
  }
}

TEST(LeafClusterResolution, KnownParentShortCircuits) {
  const auto m = build_symmetric_model(star_tree(4, 0), 3, std::vector<double>(3, 0.6));
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, symmetric_params(-2 * std::log(0.6), 0.0, 3));
  const auto lp = leaf_cluster_resolution(ctx, {2, 3}, {3}, std::vector<char>(4, 1));
  EXPECT_EQ(lp.parent, 3);
  EXPECT_EQ(lp.leaf, 2);
}

TEST(LeafClusterResolution, SymmetricStaysInCluster) {
  const auto m = build_symmetric_model(star_tree(5, 0), 3, std::vector<double>(4, 0.6));
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, symmetric_params(-2 * std::log(0.6), 0.5, 3));
  const auto lp = leaf_cluster_resolution(ctx, {0, 1}, {}, std::vector<char>(5, 1));
  EXPECT_NE(lp.leaf, lp.parent);
  EXPECT_TRUE(lp.leaf <= 1 || lp.parent <= 1);
  EXPECT_EQ(lp.leaf, leaf_cluster_resolution(ctx, {0, 1}, {}, std::vector<char>(5, 1)).leaf);
}

TEST(GetLeafParent, LongChain) {
  const auto m = build_symmetric_model(chain_tree(12), 2, std::vector<double>(11, std::exp(-0.7)));
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, symmetric_params(0.7, 0.0, 2));
  std::mt19937_64 rng(0);
  const auto lp = get_leaf_parent(ctx, std::vector<char>(12, 1), {}, {}, rng);
  EXPECT_TRUE(is_leaf_parent(m.tree(), lp));
  EXPECT_TRUE(m.tree().is_leaf(lp.leaf) || m.tree().is_leaf(lp.parent));
}

TEST(GetLeafParent, ThreeNodeChain) {
  const auto m = build_perturbed_symmetric_model(chain_tree(3), 4, {{0.7, 0.05, 1}, {0.7, 0.05, 1}});
  const auto pmfs = exact_pairwise_set(m);
  const RecoveryContext ctx(pmfs, testkit::population_params(m, NoiseSpec::none(3)));
  std::mt19937_64 rng(0);
  EXPECT_EQ(get_leaf_parent(ctx, std::vector<char>(3, 1), {}, {}, rng).parent, 1);
}

TEST(GetLeafParent, PerturbedStarResolvesHub) {
  const double alpha = alpha_for_distance(4, 0.7, 0.04, 1);
  const auto m = build_perturbed_symmetric_model(star_tree(6, 2), 4, std::vector<PerturbedEdge>(5, {alpha, 0.04, 1}));
  const NoiseSpec noise{{0.1, 0.05, 0.15, 0.0, 0.2, 0.1}, 0.2};
  const auto pmfs = exact_pairwise_set(m, noise);
  const RecoveryContext ctx(pmfs, testkit::population_params(m, noise));
  std::mt19937_64 rng(0);
  EXPECT_EQ(get_leaf_parent(ctx, std::vector<char>(6, 1), {}, {}, rng).parent, 2);
}

TEST(FindTree, TwoNodes) {
  const auto m = build_symmetric_model(chain_tree(2), 3, {0.5});
  const auto out = find_tree(exact_pairwise_set(m), symmetric_params(-2 * std::log(0.5), 0.0, 3));
  EXPECT_EQ(out.tree.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(FindTree, PopulationLandsInClass) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 9;
    const int k = 2 + trial % 4;
    const auto m = testkit::random_model(random_tree(n, rng), k, rng);
    const auto noise = testkit::random_noise(n, 0.2, rng);
    const auto out = find_tree(exact_pairwise_set(m, noise), testkit::population_params(m, noise));
    EXPECT_EQ(out.tree.size(), n);
    EXPECT_TRUE(same_equivalence_class(m.tree(), out.tree)) << "trial " << trial;
  }
}

TEST(FindTree, PerturbedExactWithT0) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + trial % 8;
    const double alpha = alpha_for_distance(4, 0.7, 0.04, 1);
    const Tree t = random_tree(n, rng);
    const auto m = build_perturbed_symmetric_model(t, 4, std::vector<PerturbedEdge>(n - 1, {alpha, 0.04, 1}));
    const auto noise = testkit::random_noise(n, 0.2, rng);
    AlgoParams p = testkit::population_params(m, noise);
    p.t0 = population_t0(m, noise, p.q_max);
    ASSERT_TRUE(p.t0.has_value());
    const auto out = find_tree(exact_pairwise_set(m, noise), p);
    EXPECT_EQ(out.tree, t) << "trial " << trial;
  }
}

TEST(FindTree, RandomizedInitStillRecovers) {
  std::mt19937_64 rng(9);
  const Tree t = random_tree(9, rng);
  const auto m = testkit::random_model(t, 3, rng);
  AlgoParams p = testkit::population_params(m, NoiseSpec::none(9));
  p.randomize_init = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    p.seed = seed;
    EXPECT_TRUE(same_equivalence_class(t, find_tree(exact_pairwise_set(m), p).tree));
  }
}

TEST(FindTree, SingularInputReportsPair) {
  // Node 2 independent of everything: its distances are infinite.
  Matrix indep = Matrix::Constant(2, 2, 0.25);
  Matrix tied(2, 2);
  tied << 0.4, 0.1, 0.1, 0.4;
  const PairwisePmfSet pmfs(3, 2, PmfSource::kExact, 0, {tied, indep, indep});
  AlgoParams p = symmetric_params(0.5, 0.0, 2);
  try {
    const auto out = find_tree(pmfs, p);
    EXPECT_EQ(out.tree.size(), 3);
  } catch (const RecoveryError& e) {
    EXPECT_GE(e.first(), 0);
  }
}

TEST(Expand, SymmetricFlagsEveryone) {
  std::mt19937_64 rng(11);
  const auto m = build_symmetric_model(random_tree(8, rng), 3, std::vector<double>(7, 0.6));
  const NoiseSpec noise{std::vector<double>(8, 0.1), 0.9};
  const auto pmfs = exact_pairwise_set(m, noise);
  AlgoParams p = testkit::population_params(m, noise);
  p.t0 = 1e-3;
  const auto out = expand_equivalence_class(find_tree(pmfs, p), pmfs, p);
  ASSERT_FALSE(out.clusters.empty());
  for (const auto& c : out.clusters) {
    EXPECT_EQ(c.candidate_parents, c.members);
    EXPECT_TRUE(c.determined);
  }
}

TEST(Expand, PerturbedFlagsOnlyParents) {
  const double alpha = alpha_for_distance(4, 0.7, 0.04, 1);
  const Tree t(7, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5}, {4, 6}});
  const auto m = build_perturbed_symmetric_model(t, 4, std::vector<PerturbedEdge>(6, {alpha, 0.04, 1}));
  const NoiseSpec noise{{0.1, 0.0, 0.2, 0.05, 0.15, 0.1, 0.0}, 0.2};
  const auto pmfs = exact_pairwise_set(m, noise);
  AlgoParams p = testkit::population_params(m, noise);
  p.t0 = population_t0(m, noise, p.q_max);
  const auto out = expand_equivalence_class(find_tree(pmfs, p), pmfs, p);
  ASSERT_EQ(out.clusters.size(), 2u);
  EXPECT_EQ(out.clusters[0].candidate_parents, (std::vector<int>{1}));
  EXPECT_EQ(out.clusters[1].candidate_parents, (std::vector<int>{4}));
}

TEST(Expand, BinaryFlagsEveryone) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testkit::random_model(random_tree(7, rng), 2, rng);
    const auto noise = testkit::random_noise(7, 0.2, rng);
    const NoiseSpec wide{noise.q, 0.99};
    const auto pmfs = exact_pairwise_set(m, wide);
    AlgoParams p = testkit::population_params(m, wide);
    p.t0 = 1e-3;
    const auto out = expand_equivalence_class(find_tree(pmfs, p), pmfs, p);
    for (const auto& c : out.clusters) EXPECT_EQ(c.candidate_parents, c.members);
  }
}

TEST(Expand, NeedsT0AndFlagsTinyTrees) {
  const auto m = build_symmetric_model(chain_tree(3), 3, {0.6, 0.6});
  const auto pmfs = exact_pairwise_set(m);
  AlgoParams p = symmetric_params(-2 * std::log(0.6), 0.5, 3);
  EXPECT_THROW(expand_equivalence_class(find_tree(pmfs, p), pmfs, p), InvalidArgument);
  p.t0 = 1e-3;
  const auto out = expand_equivalence_class(find_tree(pmfs, p), pmfs, p);
  ASSERT_EQ(out.clusters.size(), 1u);
  EXPECT_FALSE(out.clusters[0].determined);
}
