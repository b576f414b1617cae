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

#include <optional>
#include <vector>

#include "noisytree/model.hpp"
#include "noisytree/oracle.hpp"
#include "noisytree/tree.hpp"

namespace noisytree {

struct ClusterFlags {
  std::vector<int> members;
  // Members that pass the center test, i.e. may sit in the parent position.
  std::vector<int> candidate_parents;
  bool determined = true;
};

struct LeafClusterSet {
  // Sorted members, clusters ordered by smallest member.
  std::vector<std::vector<int>> clusters;
  // Node -> super-node id (smallest member of its cluster, else itself).
  std::vector<int> group;
  // Edges of the collapsed tree, normalized and sorted.
  std::vector<Edge> quotient_edges;
};

LeafClusterSet leaf_clusters(const Tree& tree);

// True iff b is a relabeling of a by permutations inside a's leaf clusters.
bool same_equivalence_class(const Tree& a, const Tree& b);

// Member of a cluster sitting in the parent position of `tree` (the one with
// degree > 1; the smallest member for a lone edge).
int cluster_hub(const Tree& tree, const std::vector<int>& members);

// True iff candidate is in truth's class and, for every cluster, the node in
// the parent position is one of the flagged candidate parents (the true
// parent is always allowed).
bool in_t_sub(const Tree& truth, const std::vector<ClusterFlags>& truth_flags, const Tree& candidate);

// Candidate parents of every leaf cluster of the true tree: the parent plus
// each leaf for which the leaf-as-center equation has a root in [0, q_max]
// (exact noisy PMFs, minimized residual below tol).
std::vector<ClusterFlags> ground_truth_flags(const TreeModel& model, const NoiseSpec& noise, double q_max,
                                             double tol = 1e-8);

// Smallest minimized leaf-as-center residual over leaves that fail the test,
// scaled by `fraction`; nullopt when every leaf passes.
std::optional<double> population_t0(const TreeModel& model, const NoiseSpec& noise, double q_max,
                                    double fraction = 0.9);

double mutual_information(const Matrix& joint);

// Maximum-weight spanning tree on pairwise mutual information.
Tree chow_liu(const PairwisePmfSet& pmfs);

struct TrialScore {
  bool exact = false;
  bool eq_class = false;
  bool in_t_sub = false;
};

TrialScore score_trial(const Tree& truth, const std::vector<ClusterFlags>& truth_flags, const Tree& candidate);

}  // namespace noisytree
