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
#include <ostream>
#include <vector>

#include "noisytree/linalg.hpp"
#include "noisytree/oracle.hpp"

namespace noisytree {

struct DistanceTable {
  int n = 0;
  Matrix d;      // symmetric, zero diagonal, may hold +inf
  Matrix kappa;  // exp(-d)
};

// -log(|det P_ij| / sqrt(det P_i det P_j)). +inf once |det P_ij| <= 1e-300.
// Throws InvalidArgument when a marginal has a non-positive entry.
double info_distance(const Matrix& joint, const Vector& marginal_i, const Vector& marginal_j);

DistanceTable distance_table(const PairwisePmfSet& pmfs);

// Upper bound on the distance between a node and its noisy copy:
// (1 - k) log(1 - q_max) - (k / 2) log(k p_min).
double eta_max(int k, double q_max, double p_min);

// Nodes j != i with d(i, j) <= threshold, nearest first, ties by index.
std::vector<int> neighborhood(const DistanceTable& dist, int i, double threshold);

struct BoundEstimates {
  double d_max_upper;
  std::optional<double> d_min_lower;
  std::optional<double> p_min_lower;
};

BoundEstimates estimate_bounds(const DistanceTable& dist, double eta, double q_max,
                               const std::vector<Vector>& noisy_marginals);

void write_distance_csv(std::ostream& out, const DistanceTable& dist);

}  // namespace noisytree
