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

#include "noisytree/quadtest.hpp"

#include <algorithm>
#include <limits>

namespace noisytree {

namespace {

constexpr double kDegenerate = 1e-14;
constexpr double kCrossSingular = 1e-12;

double distance_to_interval(double x, double lo, double hi) {
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

}  // namespace

Matrix quadratic_a(int k) {
  Matrix a = Matrix::Constant(k, k, 1.0 / (k * static_cast<double>(k)));
  a.diagonal().array() = (1.0 - k) / (k * static_cast<double>(k));
  return a;
}

Matrix quadratic_b(const Vector& center_marginal) {
  const int k = static_cast<int>(center_marginal.size());
  const Matrix o = Matrix::Ones(k, k);
  const Matrix p = center_marginal.asDiagonal();
  return -(o * p + p * o - k * p - Matrix::Identity(k, k)) / k;
}

MatrixQuadratic quad_coefficients(const PairwisePmfSet& pmfs, int end_a, int center, int end_c) {
  if (end_a == center || end_c == center || end_a == end_c) throw InvalidArgument("triplet needs distinct nodes");
  const Matrix cross = pmfs.joint(end_a, end_c);
  Eigen::PartialPivLU<Matrix> lu(cross);
  if (!(std::abs(lu.determinant()) > kCrossSingular)) {
    throw SingularMatrixError("cross joint is singular", end_a, end_c);
  }
  const Vector& marginal = pmfs.marginal(center);
  MatrixQuadratic q;
  q.a = quadratic_a(pmfs.k());
  q.b = quadratic_b(marginal);
  q.c = pmfs.joint(center, end_c) * lu.solve(pmfs.joint(end_a, center));
  q.c.diagonal() -= marginal;
  return q;
}

std::optional<double> select_root(double a, double b, double c, double q_max) {
  if (std::abs(a) < kDegenerate) {
    if (std::abs(b) < kDegenerate) return std::nullopt;
    return -c / b;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::clamp(-b / (2.0 * a), 0.0, q_max);
  // Cancellation-free pair of roots.
  const double s = std::sqrt(disc);
  const double t = -0.5 * (b + std::copysign(s, b));
  double r1 = t / a;
  double r2 = t != 0.0 ? c / t : r1;
  if (r1 > r2) std::swap(r1, r2);
  const bool in1 = r1 >= 0.0 && r1 <= q_max;
  const bool in2 = r2 >= 0.0 && r2 <= q_max;
  if (in1) return r1;
  if (in2) return r2;
  return distance_to_interval(r1, 0.0, q_max) <= distance_to_interval(r2, 0.0, q_max) ? r1 : r2;
}

double mean_root(const MatrixQuadratic& q, double q_max, std::vector<double>* per_entry) {
  const Eigen::Index k = q.a.rows();
  double sum = 0.0;
  int used = 0;
  if (per_entry) per_entry->assign(k * k, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto root = select_root(q.a(i, j), q.b(i, j), q.c(i, j), q_max);
      if (!root) continue;
      sum += *root;
      ++used;
      if (per_entry) (*per_entry)[i * k + j] = *root;
    }
  }
  return used > 0 ? sum / used : 0.0;
}

RootResult quadratic_error(const MatrixQuadratic& q, const RootPolicy& policy) {
  RootResult r;
  r.mean_root = mean_root(q, policy.q_max, &r.per_entry_roots);
  r.residual = q.residual(r.mean_root);
  // Slack for roundoff: a noiseless center lands a hair below zero.
  constexpr double kSlack = 1e-9;
  const bool in_range = r.mean_root >= -kSlack && r.mean_root <= policy.q_max + kSlack;
  const double threshold = policy.t0 ? *policy.t0 / 2.0 : policy.root_tol;
  r.feasible = in_range && r.residual < threshold;
  return r;
}

RootResult quadratic_error(const PairwisePmfSet& pmfs, const Triplet& triplet, int center, const RootPolicy& policy) {
  int ends[2];
  int found = 0;
  bool has_center = false;
  for (int v : triplet) {
    if (v == center && !has_center) {
      has_center = true;
    } else if (found < 2) {
      ends[found++] = v;
    }
  }
  if (!has_center || found != 2) throw InvalidArgument("center must be a member of the triplet");
  return quadratic_error(quad_coefficients(pmfs, ends[0], center, ends[1]), policy);
}

double binary_quadratic_check(const Matrix& joint21) {
  if (joint21.rows() != 2 || joint21.cols() != 2) throw InvalidArgument("binary check needs a 2 x 2 joint");
  if (!(std::abs(joint21.determinant()) > 0.0)) throw SingularMatrixError("binary joint is rank deficient");
  double s = 0.0;
  for (int col = 0; col < 2; ++col) {
    const double top = joint21(0, col);
    const double bottom = joint21(1, col);
    s += top * bottom / (top + bottom);
  }
  // x^2 - 2x + 4s = 0; s <= 1/4 because each column term is at most a
  // quarter of its column mass.
  return 1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * s));
}

ResidualMinimum minimize_residual(const MatrixQuadratic& q, double lo, double hi) {
  if (!(hi >= lo)) throw InvalidArgument("empty search interval");
  constexpr int kGrid = 1000;
  const double step = (hi - lo) / (kGrid - 1);
  int best = 0;
  double best_value = q.residual(lo);
  for (int g = 1; g < kGrid; ++g) {
    const double value = q.residual(lo + g * step);
    if (value < best_value) {
      best_value = value;
      best = g;
    }
  }
  double a = lo + std::max(0, best - 1) * step;
  double b = lo + std::min(kGrid - 1, best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = q.residual(x1);
  double f2 = q.residual(x2);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = q.residual(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = q.residual(x2);
    }
  }
  ResidualMinimum out{lo + best * step, best_value};
  const double mid = 0.5 * (a + b);
  const double fm = q.residual(mid);
  if (fm < out.residual) out = {mid, fm};
  return out;
}

double symmetric_leaf_root(double alpha, double q) { return 1.0 - (1.0 - q) * alpha; }

double perturbed_k3_leaf_root(double alpha, double delta, double q) {
  const double a = (1.0 - q) * alpha;
  const double d = (1.0 - q) * delta;
  return 1.0 - std::sqrt(a * a - 3.0 * d * (a - d));
}

double perturbed_leaf_residual_floor(int k, double alpha, double delta, double q) {
  if (k < 3) throw InvalidArgument("the perturbed floor needs k >= 3");
  const double a = (1.0 - q) * alpha;
  const double d = (1.0 - q) * delta;
  const double e = d * (a - d);
  return std::abs(e) * std::sqrt(2.0 * (k - 3) / (static_cast<double>(k) * (k - 1)));
}

}  // namespace noisytree
