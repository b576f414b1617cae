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

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "noisytree/evalkit.hpp"
#include "noisytree/metric.hpp"
#include "noisytree/model.hpp"
#include "noisytree/oracle.hpp"
#include "noisytree/quadtest.hpp"
#include "noisytree/tree.hpp"

namespace noisytree {

enum class QuartetKind { kStar, kNonStar, kFail };

struct QuartetVerdict {
  QuartetKind kind = QuartetKind::kFail;
  // For kNonStar: {{a, b}, {c, d}} with the first pair holding the first
  // queried node.
  std::array<std::array<int, 2>, 2> partition{};
};

// kappa in the order (12, 13, 14, 23, 24, 34) for nodes[0..3].
QuartetVerdict classify_quartet(const std::array<double, 6>& kappa, double kappa_max,
                                const std::array<int, 4>& nodes = {0, 1, 2, 3});
QuartetVerdict classify_quartet(const DistanceTable& dist, const std::array<int, 4>& nodes, double kappa_max);

// Everything the recovery routines share: distances, neighborhoods and the
// derived thresholds.
struct RecoveryContext {
  RecoveryContext(const PairwisePmfSet& pmfs, const AlgoParams& params);

  const PairwisePmfSet* pmfs;
  AlgoParams params;
  DistanceTable dist;
  double eta;
  double threshold;  // multiplier * (4 d_max + 3 eta)
  double kappa_max;  // exp(-d_min)
  std::vector<std::vector<int>> neighborhoods;

  RootPolicy root_policy() const { return {params.q_max, params.t0, params.root_tol}; }
  bool in_neighborhood(int of, int v) const;
};

// Surviving center candidates of the triplet, sorted by node id.
std::vector<int> find_center(const RecoveryContext& ctx, const Triplet& triplet, const std::vector<Edge>& edges);

struct LeafParent {
  int leaf;
  int parent;
};

// `active` is indexed by node id.
LeafParent leaf_cluster_resolution(const RecoveryContext& ctx, const std::vector<int>& candidates,
                                   const std::vector<int>& parents, const std::vector<char>& active);

LeafParent get_leaf_parent(const RecoveryContext& ctx, const std::vector<char>& active,
                           const std::vector<Edge>& edges, const std::vector<int>& parents, std::mt19937_64& rng);

struct RecoveredStructure {
  Tree tree;
  std::vector<int> parents;
  std::vector<ClusterFlags> clusters;
};

class RecoveryError : public Error {
 public:
  RecoveryError(const std::string& what, int first = -1, int second = -1)
      : Error(what), first_(first), second_(second) {}
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_;
  int second_;
};

RecoveredStructure find_tree(const PairwisePmfSet& pmfs, const AlgoParams& params);

// Needs params.t0. Fills structure.clusters from the recovered tree.
RecoveredStructure expand_equivalence_class(RecoveredStructure structure, const PairwisePmfSet& pmfs,
                                            const AlgoParams& params);

}  // namespace noisytree
