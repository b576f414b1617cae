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

#include "noisytree/recovery.hpp"

#include <algorithm>
#include <tuple>
#include <map>
#include <set>

#include "noisytree/evalkit.hpp"

namespace noisytree {

namespace {

constexpr int kFailOutcome = -2;
constexpr int kStarOutcome = -1;

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::set<Edge> edge_set(const std::vector<Edge>& edges) {
  std::set<Edge> out;
  for (auto [a, b] : edges) out.insert({std::min(a, b), std::max(a, b)});
  return out;
}

}  // namespace

QuartetVerdict classify_quartet(const std::array<double, 6>& kappa, double kappa_max, const std::array<int, 4>& nodes) {
  QuartetVerdict verdict;
  std::array<double, 6> l{};
  for (int e = 0; e < 6; ++e) {
    if (!(kappa[e] > 0.0) || !std::isfinite(kappa[e])) return verdict;
    l[e] = std::log(kappa[e]);
  }
  const double l12 = l[0], l13 = l[1], l14 = l[2], l23 = l[3], l24 = l[4], l34 = l[5];
  // log of the three ratio statistics; they sum to zero.
  const std::array<double, 3> s{0.5 * (l13 + l24 + l14 + l23) - l12 - l34,
                                0.5 * (l12 + l34 + l14 + l23) - l13 - l24,
                                0.5 * (l13 + l24 + l12 + l34) - l14 - l23};
  const double threshold = std::log((1.0 + kappa_max * kappa_max) / 2.0);
  const auto [a, b, c, d] = nodes;
  const std::array<std::array<std::array<int, 2>, 2>, 3> pairings{{{{{a, b}, {c, d}}}, {{{a, c}, {b, d}}}, {{{a, d}, {b, c}}}}};
  for (int p = 0; p < 3; ++p) {
    if (s[p] <= threshold && s[(p + 1) % 3] >= 0.0 && s[(p + 2) % 3] >= 0.0) {
      verdict.kind = QuartetKind::kNonStar;
      verdict.partition = pairings[p];
      return verdict;
    }
  }
  if (s[0] >= threshold && s[1] >= threshold && s[2] >= threshold) verdict.kind = QuartetKind::kStar;
  return verdict;
}

QuartetVerdict classify_quartet(const DistanceTable& dist, const std::array<int, 4>& nodes, double kappa_max) {
  const auto k = [&](int i, int j) { return dist.kappa(nodes[i], nodes[j]); };
  return classify_quartet({k(0, 1), k(0, 2), k(0, 3), k(1, 2), k(1, 3), k(2, 3)}, kappa_max, nodes);
}

RecoveryContext::RecoveryContext(const PairwisePmfSet& pmfs_in, const AlgoParams& params_in)
    : pmfs(&pmfs_in), params(params_in) {
  params.validate(pmfs_in.k());
  dist = distance_table(pmfs_in);
  eta = eta_max(pmfs_in.k(), params.q_max, params.p_min);
  threshold = params.neighborhood_multiplier * (4.0 * params.d_max + 3.0 * eta);
  kappa_max = std::exp(-params.d_min);
  neighborhoods.reserve(dist.n);
  for (int v = 0; v < dist.n; ++v) neighborhoods.push_back(neighborhood(dist, v, threshold));
}

bool RecoveryContext::in_neighborhood(int of, int v) const {
  const double d = dist.d(of, v);
  return of != v && std::isfinite(d) && d <= threshold;
}

std::vector<int> find_center(const RecoveryContext& ctx, const Triplet& triplet, const std::vector<Edge>& edges) {
  const auto recovered = edge_set(edges);
  std::array<bool, 3> alive{true, true, true};
  // Per triplet member, the (node, outcome) votes of nodes already attached
  // to that member by a recovered edge.
  std::array<std::vector<std::pair<int, int>>, 3> blocs;

  for (int j = 0; j < ctx.dist.n; ++j) {
    if (contains({triplet.begin(), triplet.end()}, j)) continue;
    if (!ctx.in_neighborhood(triplet[0], j) || !ctx.in_neighborhood(triplet[1], j) ||
        !ctx.in_neighborhood(triplet[2], j)) {
      continue;
    }
    const auto verdict = classify_quartet(ctx.dist, {triplet[0], triplet[1], triplet[2], j}, ctx.kappa_max);
    int outcome = kFailOutcome;
    if (verdict.kind == QuartetKind::kStar) {
      outcome = kStarOutcome;
    } else if (verdict.kind == QuartetKind::kNonStar) {
      const auto& side = verdict.partition[0][0] == j || verdict.partition[0][1] == j ? verdict.partition[0]
                                                                                         : verdict.partition[1];
      const int mate = side[0] == j ? side[1] : side[0];
      outcome = static_cast<int>(std::find(triplet.begin(), triplet.end(), mate) - triplet.begin());
    }
    int bloc = -1;
    for (int t = 0; t < 3 && bloc < 0; ++t) {
      if (recovered.count({std::min(j, triplet[t]), std::max(j, triplet[t])})) bloc = t;
    }
    if (bloc >= 0) {
      blocs[bloc].emplace_back(j, outcome);
    } else if (outcome >= 0) {
      alive[outcome] = false;
    }
  }

  for (const auto& bloc : blocs) {
    std::map<int, int> votes;
    for (auto [j, outcome] : bloc) {
      if (outcome != kFailOutcome) ++votes[outcome];
    }
    if (votes.empty()) continue;
    int top = 0;
    for (auto [outcome, count] : votes) top = std::max(top, count);
    int majority = kFailOutcome;
    // Members are in increasing node order, so the first tied outcome seen
    // belongs to the lowest-index member.
    for (auto [j, outcome] : bloc) {
      if (outcome != kFailOutcome && votes[outcome] == top) {
        majority = outcome;
        break;
      }
    }
    if (majority >= 0) alive[majority] = false;
  }

  std::vector<int> out;
  for (int t = 0; t < 3; ++t) {
    if (alive[t]) out.push_back(triplet[t]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LeafParent leaf_cluster_resolution(const RecoveryContext& ctx, const std::vector<int>& candidates,
                                   const std::vector<int>& parents, const std::vector<char>& active) {
  std::vector<int> c = candidates;
  std::sort(c.begin(), c.end());
  if (c.size() < 2) throw InvalidArgument("leaf cluster resolution needs at least two candidates");
  const auto first_other = [&](int parent) { return c[0] == parent ? c[1] : c[0]; };
  for (int v : c) {
    if (contains(parents, v)) return {first_other(v), v};
  }

  const RootPolicy policy = ctx.root_policy();
  const double guard = ctx.params.d_max + 2.0 * ctx.eta;
  // Raw residual argmin; with t0 known, candidates passing err < t0/2 inside
  // [0, q_max] rank first.
  std::tuple<bool, double, int> best_key{true, std::numeric_limits<double>::infinity(), -1};
  int best = -1;
  const auto consider = [&](const RootResult& r, int v) {
    const std::tuple<bool, double, int> key{ctx.params.t0 && !r.feasible, r.residual, v};
    if (best < 0 || key < best_key) {
      best_key = key;
      best = v;
    }
  };
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t q = p + 1; q < c.size(); ++q) {
      const int i1 = c[p];
      const int i2 = c[q];
      for (int i3 : ctx.neighborhoods[i1]) {
        if (i3 == i2 || !ctx.in_neighborhood(i2, i3)) continue;
        const Triplet triplet{i1, i2, i3};
        std::vector<int> roles{i1, i2};
        if (active[i3] && ctx.dist.d(i3, i1) <= guard && ctx.dist.d(i3, i2) <= guard &&
            contains(find_center(ctx, triplet, {}), i3)) {
          roles.push_back(i3);
        }
        for (int v : roles) {
          try {
            consider(quadratic_error(*ctx.pmfs, triplet, v, policy), v);
          } catch (const SingularMatrixError&) {
            // Unusable third node for this role.
          }
        }
      }
    }
  }
  if (best < 0) best = c[0];
  return {first_other(best), best};
}

LeafParent get_leaf_parent(const RecoveryContext& ctx, const std::vector<char>& active,
                           const std::vector<Edge>& edges, const std::vector<int>& parents, std::mt19937_64& rng) {
  const int n = ctx.dist.n;
  std::vector<int> members;
  for (int v = 0; v < n; ++v) {
    if (active[v]) members.push_back(v);
  }
  if (members.size() < 3) throw InvalidArgument("leaf search needs at least three active nodes");

  int r = -1;
  for (int v : members) {
    if (contains(parents, v)) {
      r = v;
      break;
    }
  }
  if (r < 0) {
    if (ctx.params.randomize_init && parents.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
      r = members[pick(rng)];
    } else {
      r = members[0];
    }
  }
  int l = -1;
  for (int v : ctx.neighborhoods[r]) {
    if (active[v]) {
      l = v;
      break;
    }
  }
  if (l < 0) {
    for (int v : members) {
      if (v != r && (l < 0 || ctx.dist.d(r, v) < ctx.dist.d(r, l))) l = v;
    }
  }

  std::vector<char> visited(n, 0);
  visited[l] = visited[r] = 1;
  bool l_r_order = false;
  std::size_t i = 0;
  while (i < ctx.neighborhoods[r].size()) {
    const int z = ctx.neighborhoods[r][i];
    if (visited[z] || !active[z]) {
      ++i;
      continue;
    }
    visited[z] = 1;
    const auto c = find_center(ctx, {l, r, z}, edges);
    if (c.size() == 1) l_r_order = true;
    if (c.size() == 1 && c[0] == z) {
      l = z;
    } else if (c.size() == 1 && c[0] == r) {
      l = r;
      r = z;
      i = 0;
    } else if (c.size() > 1) {
      if (l_r_order && contains(c, r) && contains(c, l)) return {r, l};
      return leaf_cluster_resolution(ctx, c, parents, active);
    }
  }
  // Once any triplet had a single center the walk has oriented l -> r.
  if (l_r_order) return {r, l};

  // Nothing pinned the pair down; call the endpoint that sits farther from
  // the rest of the active set the leaf.
  const auto spread = [&](int v) {
    double worst = 0.0;
    for (int w : members) {
      if (w != v && std::isfinite(ctx.dist.d(v, w))) worst = std::max(worst, ctx.dist.d(v, w));
    }
    return worst;
  };
  if (spread(l) > spread(r)) return {l, r};
  return {r, l};
}

RecoveredStructure find_tree(const PairwisePmfSet& pmfs, const AlgoParams& params) {
  const int n = pmfs.size();
  if (n < 2) throw InvalidArgument("need at least two nodes");
  if (n == 2) return {Tree(2, {{0, 1}}), {}, {}};

  std::optional<RecoveryContext> ctx;
  try {
    ctx.emplace(pmfs, params);
  } catch (const SingularMatrixError& e) {
    throw RecoveryError(e.what(), e.first(), e.second());
  }
  std::mt19937_64 rng(params.seed);
  std::vector<char> active(n, 1);
  int remaining = n;
  std::vector<Edge> edges;
  std::vector<int> parents;
  while (remaining > 2) {
    LeafParent lp{};
    try {
      lp = get_leaf_parent(*ctx, active, edges, parents, rng);
    } catch (const SingularMatrixError& e) {
      throw RecoveryError(e.what(), e.first(), e.second());
    }
    if (lp.leaf == lp.parent || !active[lp.leaf] || !active[lp.parent]) {
      throw RecoveryError("leaf search returned an invalid pair", lp.leaf, lp.parent);
    }
    active[lp.leaf] = 0;
    --remaining;
    edges.emplace_back(lp.leaf, lp.parent);
    if (!contains(parents, lp.parent)) parents.push_back(lp.parent);
  }
  std::vector<int> last;
  for (int v = 0; v < n; ++v) {
    if (active[v]) last.push_back(v);
  }
  edges.emplace_back(last[0], last[1]);
  std::sort(parents.begin(), parents.end());
  return {Tree(n, std::move(edges)), std::move(parents), {}};
}

RecoveredStructure expand_equivalence_class(RecoveredStructure structure, const PairwisePmfSet& pmfs,
                                            const AlgoParams& params) {
  if (!params.t0) throw InvalidArgument("expanding the equivalence class needs t0");
  const Tree& tree = structure.tree;
  const int n = tree.size();
  const RootPolicy policy{params.q_max, params.t0, params.root_tol};
  structure.clusters.clear();
  for (const auto& members : leaf_clusters(tree).clusters) {
    ClusterFlags flags;
    flags.members = members;
    int hub = members[0];
    for (int v : members) {
      if (tree.degree(v) > 1) hub = v;
    }
    std::vector<int> thirds;
    for (int v = 0; v < n; ++v) {
      if (!contains(members, v)) thirds.push_back(v);
    }
    std::size_t tested = 0;
    for (int m : members) {
      const int partner = m != hub ? hub : (members[0] != m ? members[0] : members[1]);
      std::vector<int> options = thirds;
      for (int v : members) {
        if (v != m && v != partner) options.push_back(v);
      }
      for (int third : options) {
        try {
          const auto result = quadratic_error(pmfs, {partner, m, third}, m, policy);
          ++tested;
          if (result.feasible) flags.candidate_parents.push_back(m);
          break;
        } catch (const SingularMatrixError&) {
        }
      }
    }
    // Without an outside node the test falls back to another member, but the
    // cluster counts as undetermined.
    flags.determined = tested == members.size() && !thirds.empty();
    structure.clusters.push_back(std::move(flags));
  }
  return structure;
}

}  // namespace noisytree
