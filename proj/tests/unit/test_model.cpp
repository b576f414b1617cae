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

#include "noisytree/metric.hpp"
#include "noisytree/model.hpp"
#include "noisytree/oracle.hpp"
#include "random_models.hpp"

using namespace noisytree;

TEST(SymmetricModel, BinaryHalfAlpha) {
  const auto m = build_symmetric_model(chain_tree(2), 2, {0.5});
  Matrix expected(2, 2);
  expected << 0.75, 0.25, 0.25, 0.75;
  EXPECT_LT((m.conditional(1) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SymmetricModel, EdgeDistanceIsMinusKMinusOneLogAlpha) {
  for (int k = 2; k <= 6; ++k) {
    for (double alpha : {0.3, 0.6, 0.9}) {
      const auto m = build_symmetric_model(chain_tree(2), k, {alpha});
      const Matrix p = exact_pairwise_pmf(m, 0, 1);
      const double d = info_distance(p, exact_marginal(m, 0), exact_marginal(m, 1));
      EXPECT_NEAR(d, -(k - 1) * std::log(alpha), 1e-12) << "k=" << k << " alpha=" << alpha;
    }
  }
}

TEST(SymmetricModel, RejectsBadInputs) {
  EXPECT_THROW(build_symmetric_model(chain_tree(2), 3, {1.0}), InvalidArgument);
  EXPECT_THROW(build_symmetric_model(chain_tree(2), 3, {0.0}), InvalidArgument);
  EXPECT_THROW(build_symmetric_model(chain_tree(2), 1, {0.5}), InvalidArgument);
  EXPECT_THROW(build_symmetric_model(chain_tree(3), 3, {0.5}), InvalidArgument);
}

TEST(SymmetricModel, DistanceBoundGuard) {
  const DistanceBounds bounds{0.5, 1.0};
  EXPECT_NO_THROW(build_symmetric_model(chain_tree(2), 2, {std::exp(-0.7)}, bounds));
  EXPECT_THROW(build_symmetric_model(chain_tree(2), 2, {std::exp(-1.2)}, bounds), InvalidArgument);
  EXPECT_THROW(build_symmetric_model(chain_tree(2), 2, {std::exp(-0.3)}, bounds), InvalidArgument);
}

TEST(SymmetricModel, MarginalsStayUniform) {
  std::mt19937_64 rng(3);
  const Tree t = random_tree(9, rng);
  std::vector<double> alphas;
  for (std::size_t e = 0; e < t.edges().size(); ++e) alphas.push_back(testkit::uniform(rng, 0.2, 0.9));
  const auto m = build_symmetric_model(t, 5, alphas);
  for (const auto& marginal : exact_marginals(m)) {
    EXPECT_LT((marginal.array() - 0.2).abs().maxCoeff(), 1e-12);
  }
}

TEST(PerturbedModel, Entries) {
  const Matrix m = perturbed_conditional(4, 0.6, 0.1, 1);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expected = i == j ? 0.6 : (j == (i + 1) % 4 ? 0.2 : 0.1);
      EXPECT_NEAR(m(i, j), expected, 1e-15);
    }
  }
}

TEST(PerturbedModel, ZeroDeltaIsSymmetric) {
  const Tree t = chain_tree(4);
  const auto a = build_perturbed_symmetric_model(t, 4, {{0.6, 0.0, 1}, {0.5, 0.0, 1}, {0.7, 0.0, 1}});
  const auto b = build_symmetric_model(t, 4, {0.6, 0.5, 0.7});
  for (int v = 1; v < 4; ++v) EXPECT_LE((a.conditional(v) - b.conditional(v)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PerturbedModel, RejectsNegativeEntries) {
  EXPECT_THROW(perturbed_conditional(4, 0.6, 0.75, 1), InvalidArgument);
  EXPECT_THROW(perturbed_conditional(4, 0.6, 0.1, 0), InvalidArgument);
  EXPECT_THROW(perturbed_conditional(4, 0.6, 0.1, 4), InvalidArgument);
  EXPECT_THROW(build_perturbed_symmetric_model(chain_tree(2), 4, {{0.3, 0.3, 1}}), InvalidArgument);
}

TEST(PerturbedModel, AlphaForDistanceInverts) {
  for (double delta : {0.0, 0.02, 0.04}) {
    const double alpha = alpha_for_distance(4, 0.7, delta, 1);
    const auto m = build_perturbed_symmetric_model(chain_tree(2), 4, {{alpha, delta, 1}});
    const double d = info_distance(exact_pairwise_pmf(m, 0, 1), exact_marginal(m, 0), exact_marginal(m, 1));
    EXPECT_NEAR(d, 0.7, 1e-10);
  }
}

TEST(TreeModelInvariants, RejectsInvalidConditionals) {
  const Tree t = chain_tree(2);
  Matrix bad(2, 2);
  bad << 0.5, 0.5, 0.6, 0.5;
  EXPECT_THROW(TreeModel(t, 2, 0, Vector::Constant(2, 0.5), {Matrix(), bad}), InvalidArgument);
  Matrix singular(2, 2);
  singular << 0.5, 0.5, 0.5, 0.5;
  EXPECT_THROW(TreeModel(t, 2, 0, Vector::Constant(2, 0.5), {Matrix(), singular}), InvalidArgument);
  Matrix ok = Matrix::Identity(2, 2);
  EXPECT_THROW(TreeModel(t, 2, 0, Vector::Constant(2, 0.6), {Matrix(), ok}), InvalidArgument);
}

TEST(TreeModelInvariants, RandomModelMarginalsAreDistributions) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 8;
    const int k = 2 + trial % 4;
    const auto m = testkit::random_model(random_tree(n, rng), k, rng);
    for (const auto& marginal : exact_marginals(m)) {
      EXPECT_GE(marginal.minCoeff(), 0.0);
      EXPECT_NEAR(marginal.sum(), 1.0, 1e-10);
    }
  }
}

TEST(Assumptions, SymmetricChainWithinBounds) {
  const auto m = build_symmetric_model(chain_tree(4), 2, {std::exp(-0.7), std::exp(-0.7), std::exp(-0.7)});
  AlgoParams p;
  p.d_min = 0.5;
  p.d_max = 1.0;
  p.p_min = 0.5;
  p.q_max = 0.2;
  EXPECT_TRUE(validate_assumptions(m, NoiseSpec::none(4), p).empty());
}

TEST(Assumptions, ReportsNoiseBound) {
  const auto m = build_symmetric_model(chain_tree(2), 2, {0.5});
  AlgoParams p;
  p.d_min = 0.1;
  p.d_max = 2.0;
  p.p_min = 0.5;
  p.q_max = 0.4;
  const auto report = validate_assumptions(m, NoiseSpec{{0.5, 0.0}, 0.4}, p);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].assumption, 3);
}

TEST(Assumptions, ReportsMassAndDistance) {
  const auto m = build_symmetric_model(chain_tree(2), 3, {0.5});
  AlgoParams p;
  p.d_min = 2.0;
  p.d_max = 3.0;
  p.p_min = 0.34;
  const auto report = validate_assumptions(m, NoiseSpec::none(2), p);
  bool mass = false;
  bool distance = false;
  for (const auto& v : report) {
    mass |= v.assumption == 1;
    distance |= v.assumption == 2;
  }
  EXPECT_TRUE(mass);
  EXPECT_TRUE(distance);
}

TEST(AlgoParamsValidate, Ranges) {
  AlgoParams p;
  p.d_min = 0.5;
  p.d_max = 1.0;
  p.p_min = 0.25;
  EXPECT_NO_THROW(p.validate(4));
  p.p_min = 0.3;
  EXPECT_THROW(p.validate(4), InvalidArgument);
  p.p_min = 0.25;
  p.t0 = 0.0;
  EXPECT_THROW(p.validate(4), InvalidArgument);
  p.t0.reset();
  p.d_max = 0.4;
  EXPECT_THROW(p.validate(4), InvalidArgument);
}
