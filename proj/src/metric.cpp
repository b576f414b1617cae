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

#include "noisytree/metric.hpp"

#include <algorithm>
#include <iomanip>

namespace noisytree {

namespace {

constexpr double kUnderflowLog = -690.7755278982137;  // log(1e-300)

double log_det_diag(const Vector& m) {
  double acc = 0.0;
  for (Eigen::Index s = 0; s < m.size(); ++s) {
    if (!(m(s) > 0.0)) throw InvalidArgument("marginal has a zero entry");
    acc += std::log(m(s));
  }
  return acc;
}

}  // namespace

double info_distance(const Matrix& joint, const Vector& marginal_i, const Vector& marginal_j) {
  const double li = log_det_diag(marginal_i);
  const double lj = log_det_diag(marginal_j);
  const double lij = log_abs_det(joint);
  if (lij <= kUnderflowLog) return std::numeric_limits<double>::infinity();
  return -(lij - 0.5 * (li + lj));
}

DistanceTable distance_table(const PairwisePmfSet& pmfs) {
  const int n = pmfs.size();
  DistanceTable t{n, Matrix::Zero(n, n), Matrix::Ones(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = 0.0;
      try {
        d = info_distance(pmfs.joint(i, j), pmfs.marginal(i), pmfs.marginal(j));
      } catch (const InvalidArgument& e) {
        throw SingularMatrixError(std::string(e.what()) + " for pair (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")",
                                  i, j);
      }
      t.d(i, j) = t.d(j, i) = d;
      t.kappa(i, j) = t.kappa(j, i) = std::exp(-d);
    }
  }
  return t;
}

double eta_max(int k, double q_max, double p_min) {
  if (k < 2) throw InvalidArgument("support size must be at least 2");
  if (!(q_max >= 0.0 && q_max < 1.0)) throw InvalidArgument("q_max must lie in [0, 1)");
  if (!(p_min > 0.0 && p_min <= 1.0 / k + 1e-15)) throw InvalidArgument("need 0 < p_min <= 1/k");
  const double value = (1.0 - k) * std::log1p(-q_max) - 0.5 * k * std::log(k * p_min);
  return std::max(value, 0.0);
}

std::vector<int> neighborhood(const DistanceTable& dist, int i, double threshold) {
  std::vector<int> out;
  for (int j = 0; j < dist.n; ++j) {
    if (j != i && std::isfinite(dist.d(i, j)) && dist.d(i, j) <= threshold) out.push_back(j);
  }
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return dist.d(i, a) < dist.d(i, b); });
  return out;
}

BoundEstimates estimate_bounds(const DistanceTable& dist, double eta, double q_max,
                               const std::vector<Vector>& noisy_marginals) {
  if (dist.n < 2) throw InvalidArgument("need at least two nodes");
  double upper = -std::numeric_limits<double>::infinity();
  double lower = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dist.n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < dist.n; ++j) {
      if (j != i) nearest = std::min(nearest, dist.d(i, j));
    }
    upper = std::max(upper, nearest);
    lower = std::min(lower, nearest);
  }
  BoundEstimates out{upper, std::nullopt, std::nullopt};
  if (lower - 2.0 * eta > 0.0) out.d_min_lower = lower - 2.0 * eta;
  double mass = std::numeric_limits<double>::infinity();
  for (const auto& m : noisy_marginals) mass = std::min(mass, m.minCoeff());
  if (!noisy_marginals.empty() && mass - q_max > 0.0) out.p_min_lower = mass - q_max;
  return out;
}

void write_distance_csv(std::ostream& out, const DistanceTable& dist) {
  out << "i,j,d,kappa\n" << std::setprecision(17);
  for (int i = 0; i < dist.n; ++i) {
    for (int j = i + 1; j < dist.n; ++j) out << i << ',' << j << ',' << dist.d(i, j) << ',' << dist.kappa(i, j) << '\n';
  }
}

}  // namespace noisytree
