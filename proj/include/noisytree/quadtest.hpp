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
#include <optional>
#include <vector>

#include "noisytree/linalg.hpp"
#include "noisytree/oracle.hpp"

namespace noisytree {

// x^2 A + x B + C. Vanishes at x = q_b when the center b separates the two
// ends and has noise level q_b.
struct MatrixQuadratic {
  Matrix a;
  Matrix b;
  Matrix c;

  Matrix evaluate(double x) const { return (x * x) * a + x * b + c; }
  double residual(double x) const { return evaluate(x).norm(); }
};

// A = (O - kI)/k^2, B = -(O P + P O - k P - I)/k for the diagonal marginal
// matrix P of the center.
Matrix quadratic_a(int k);
Matrix quadratic_b(const Vector& center_marginal);

// C = P(center, c) P(a, c)^-1 P(a, center) - diag(P_center). Throws
// SingularMatrixError when |det P(a, c)| <= 1e-12.
MatrixQuadratic quad_coefficients(const PairwisePmfSet& pmfs, int end_a, int center, int end_c);

struct RootPolicy {
  double q_max = 1.0;
  std::optional<double> t0;
  // Used as the feasibility threshold when t0 is absent.
  double root_tol = 1e-6;
};

// Root of a x^2 + b x + c chosen for the interval [0, q_max]; nullopt when
// the entry is degenerate (|a|, |b| < 1e-14).
std::optional<double> select_root(double a, double b, double c, double q_max);

struct RootResult {
  double mean_root = 0.0;
  double residual = 0.0;
  std::vector<double> per_entry_roots;  // NaN for skipped entries
  bool feasible = false;
};

double mean_root(const MatrixQuadratic& q, double q_max, std::vector<double>* per_entry = nullptr);

using Triplet = std::array<int, 3>;

// Tests `center` (a member of the triplet) as the middle node.
RootResult quadratic_error(const PairwisePmfSet& pmfs, const Triplet& triplet, int center,
                           const RootPolicy& policy);
RootResult quadratic_error(const MatrixQuadratic& q, const RootPolicy& policy);

// Smaller root of x^2/4 - x/2 + s = 0 with s the column-wise sum of
// P(0,c) P(1,c) / (P(0,c) + P(1,c)). Throws on a rank-deficient joint.
double binary_quadratic_check(const Matrix& joint21);

struct ResidualMinimum {
  double x;
  double residual;
};

// min over x in [lo, hi] of the Frobenius residual: 1000-point grid then
// golden-section refinement around the best grid point.
ResidualMinimum minimize_residual(const MatrixQuadratic& q, double lo, double hi);

// Closed forms for a leaf tested as center against its parent, with uniform
// marginals, edge parameters (alpha, delta) and leaf noise q.
// Symmetric edge: the common root 1 - (1 - q) alpha.
double symmetric_leaf_root(double alpha, double q);
// Perturbed edge, k = 3: the root 1 - sqrt(a^2 - 3 d (a - d)) with
// a = (1 - q) alpha, d = (1 - q) delta.
double perturbed_k3_leaf_root(double alpha, double delta, double q);
// Perturbed edge, k >= 4, offset with 2c != 0 mod k: no x makes the residual
// smaller than |e| sqrt(2 (k - 3) / (k (k - 1))), e = d (a - d). The floor is
// attained when (1 - x)^2 = a^2 - 2 k e / (k - 1) is reachable.
double perturbed_leaf_residual_floor(int k, double alpha, double delta, double q);

}  // namespace noisytree
