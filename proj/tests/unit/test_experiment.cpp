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

#include <filesystem>
#include <sstream>

#include "noisytree/experiment.hpp"
#include "noisytree/io.hpp"

using namespace noisytree;

namespace {

std::string sweep_csv(const ExperimentConfig& c) {
  std::ostringstream out;
  write_sweep_csv(out, run_sweep(c).rows);
  return out.str();
}

}  // namespace

TEST(Config, ParsesSectionsAndLists) {
  const auto c = parse_config(R"(
[model]
family = perturbed
shape = star
n = 5
k = 4
distances = 0.5, 0.7
deltas = 0, 0.04
[noise]
q_max = 0.1
rule = alternate
[run]
sample_sizes = 1e3, 10000
trials = 3
seed = 9
[algo]
t0 = population
neighborhood_multiplier = 0.5
)");
  EXPECT_EQ(c.shape, TreeShape::kStar);
  EXPECT_EQ(c.distances, (std::vector<double>{0.5, 0.7}));
  EXPECT_EQ(c.sample_sizes, (std::vector<std::uint64_t>{1000, 10000}));
  EXPECT_EQ(c.rule, NoiseRule::kAlternate);
  EXPECT_EQ(c.t0_mode, T0Mode::kPopulation);
  EXPECT_EQ(c.neighborhood_multiplier, 0.5);
  EXPECT_EQ(sweep_grid(c).size(), 4u);
}

TEST(Config, RoundTripsThroughText) {
  ExperimentConfig c;
  c.distances = {0.3, 0.7};
  c.d_min = 0.2;
  c.t0_mode = T0Mode::kFixed;
  c.t0 = 0.01;
  const auto back = parse_config(config_to_text(c));
  EXPECT_EQ(config_to_text(back), config_to_text(c));
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("[run]\ntrials = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("[bogus]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nn = two\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\ndistances =\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nfamily = file\nmodel_file = /nonexistent.json\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent.ini"), ConfigError);
}

TEST(Noise, Rules) {
  const auto alt = draw_noise(NoiseRule::kAlternate, 0.2, 5, 1);
  EXPECT_EQ(alt.q, (std::vector<double>{0.2, 0.0, 0.2, 0.0, 0.2}));
  const auto uni = draw_noise(NoiseRule::kUniform, 0.2, 50, 1);
  for (double q : uni.q) {
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 0.2);
  }
  EXPECT_EQ(uni.q, draw_noise(NoiseRule::kUniform, 0.2, 50, 1).q);
  EXPECT_EQ(draw_noise(NoiseRule::kNone, 0.2, 3, 1).q, (std::vector<double>{0, 0, 0}));
}

TEST(Models, DistanceReading) {
  ExperimentConfig c;
  c.family = ModelFamily::kSymmetric;
  c.k = 2;
  c.n = 3;
  c.distances = {0.7};
  const auto point = sweep_grid(c).front();
  EXPECT_NEAR(build_model(c, point, build_tree(c)).conditional(1)(0, 0), 0.5 + 0.5 * std::exp(-0.7), 1e-15);
  c.distance_reading = DistanceReading::kExp;
  EXPECT_NEAR(edge_distance(c, 0.7), std::exp(-0.7), 1e-15);
}

TEST(Sweep, ReproducibleAcrossThreadCounts) {
  ExperimentConfig c;
  c.n = 6;
  c.deltas = {0.0, 0.04};
  c.sample_sizes = {500, 2000};
  c.trials = 4;
  c.threads = 1;
  const auto one = sweep_csv(c);
  c.threads = 4;
  EXPECT_EQ(sweep_csv(c), one);
  c.seed = 2;
  EXPECT_NE(sweep_csv(c), one);
  EXPECT_EQ(one.substr(0, one.find('\n')),
            "setting,N,fraction_exact,fraction_eq_class,algorithm,fraction_in_t_sub,failed_trials");
  // 2 deltas x 2 sizes x 2 algorithms
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 9);
}

TEST(Sweep, ExactPmfSymmetricChainLandsInClass) {
  ExperimentConfig c;
  c.family = ModelFamily::kSymmetric;
  c.exact_pmf = true;
  c.trials = 5;
  const auto result = run_sweep(c);
  for (const auto& row : result.rows) {
    if (row.algorithm == "ours") {
      EXPECT_EQ(row.n_samples, 0u);
      EXPECT_EQ(row.fraction_eq_class, 1.0);
      EXPECT_EQ(row.failed_trials, 0);
    }
  }
  EXPECT_EQ(result.trials.size(), 10u);
}

TEST(Identifiability, PhaseMap) {
  ExperimentConfig c;
  c.id_k = {3, 5};
  c.id_delta = {0.0, 0.05};
  c.id_q = {0.1};
  const auto rows = run_identifiability(c);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    if (r.center_role == "parent" || r.delta == 0.0 || r.k == 3) {
      EXPECT_TRUE(r.feasible) << r.k << " " << r.delta << " " << r.center_role;
    } else {
      EXPECT_FALSE(r.feasible);
      EXPECT_GE(r.residual, r.floor - 1e-9);
    }
  }
  std::ostringstream out;
  write_identifiability_csv(out, rows);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "k,alpha,delta,q,center_role,mean_root,residual,feasible,floor");
}

TEST(Provenance, StampsDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "noisytree_stamp_test";
  std::filesystem::remove_all(dir);
  stamp_output_dir(dir, ExperimentConfig{});
  EXPECT_TRUE(std::filesystem::exists(dir / "config.resolved.ini"));
  EXPECT_NE(read_file(dir / "provenance.txt").find("git_describe"), std::string::npos);
  std::filesystem::remove_all(dir);
}
