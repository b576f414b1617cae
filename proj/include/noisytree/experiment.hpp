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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noisytree/evalkit.hpp"
#include "noisytree/model.hpp"

namespace noisytree {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ModelFamily { kSymmetric, kPerturbed, kFile };
enum class TreeShape { kChain, kStar, kRandom, kFile };
enum class NoiseRule { kNone, kUniform, kAlternate };
// How a configured edge distance value v is read: kPlain uses v itself,
// kExp uses exp(-v).
enum class DistanceReading { kPlain, kExp };
enum class T0Mode { kNone, kPopulation, kFixed };

struct ExperimentConfig {
  // [model]
  ModelFamily family = ModelFamily::kPerturbed;
  TreeShape shape = TreeShape::kChain;
  int n = 7;
  int k = 4;
  std::vector<double> distances{0.7};
  DistanceReading distance_reading = DistanceReading::kPlain;
  std::vector<double> deltas{0.0};
  int offset = 1;
  std::filesystem::path model_file;
  std::filesystem::path tree_file;

  // [noise]
  std::vector<double> q_max{0.2};
  NoiseRule rule = NoiseRule::kUniform;

  // [run]
  std::vector<std::uint64_t> sample_sizes{1000};
  int trials = 1;
  std::uint64_t seed = 1;
  bool exact_pmf = false;
  unsigned threads = 1;
  bool chow_liu = true;
  std::filesystem::path out_dir = "out";

  // [algo]; unset distance bounds come from the true edge distances widened
  // by bound_margin, unset p_min from the smallest true marginal mass.
  std::optional<double> d_min;
  std::optional<double> d_max;
  std::optional<double> p_min;
  double bound_margin = 0.05;
  T0Mode t0_mode = T0Mode::kNone;
  double t0 = 0.0;
  double neighborhood_multiplier = 1.0;
  double root_tol = 1e-6;
  bool randomize_init = false;

  // [identifiability]
  std::vector<int> id_k{3, 4, 5};
  std::vector<double> id_alpha{0.6};
  std::vector<double> id_delta{0.0, 0.05};
  std::vector<double> id_q{0.0, 0.1};
  double id_tol = 1e-8;

  // Throws ConfigError.
  void validate() const;
};

// INI-style text: [section] headers and key = value lines; lists are comma
// separated. Relative file paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_text(const ExperimentConfig& config);

const char* git_describe();

// Stream tags fed to derive_seed so every random draw has its own key.
namespace seed_tag {
inline constexpr std::uint64_t kTree = 11;
inline constexpr std::uint64_t kNoise = 12;
inline constexpr std::uint64_t kSample = 13;
inline constexpr std::uint64_t kChannel = 14;
inline constexpr std::uint64_t kAlgo = 15;
}  // namespace seed_tag

struct GridPoint {
  std::size_t index;
  double distance;  // raw configured value
  double delta;
  double q_max;
  std::string setting;
};

std::vector<GridPoint> sweep_grid(const ExperimentConfig& config);
double edge_distance(const ExperimentConfig& config, double raw);

Tree build_tree(const ExperimentConfig& config);
TreeModel build_model(const ExperimentConfig& config, const GridPoint& point, const Tree& tree);
NoiseSpec draw_noise(NoiseRule rule, double q_max, int n, std::uint64_t seed);
AlgoParams resolve_params(const ExperimentConfig& config, const TreeModel& model, const NoiseSpec& noise);
// Same, when only data is available: unset bounds are estimated from the
// observed distances and marginals.
AlgoParams params_from_data(const ExperimentConfig& config, const PairwisePmfSet& pmfs, double q_max);

struct TrialRecord {
  std::string setting;
  int trial = 0;
  std::string algorithm;
  std::uint64_t n_samples = 0;
  TrialScore score;
  bool failed = false;
  double wall_ms = 0.0;
};

struct SweepRow {
  std::string setting;
  std::uint64_t n_samples = 0;
  std::string algorithm;
  double fraction_exact = 0.0;
  double fraction_eq_class = 0.0;
  double fraction_in_t_sub = 0.0;
  int failed_trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialRecord> trials;
};

SweepResult run_sweep(const ExperimentConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials);

struct IdentifiabilityRow {
  int k;
  double alpha;
  double delta;
  double q;
  std::string center_role;
  double mean_root;
  double residual;  // minimized over [0, 1]
  bool feasible;
  double floor;  // closed-form lower bound on the residual, 0 when none
};

std::vector<IdentifiabilityRow> run_identifiability(const ExperimentConfig& config);
void write_identifiability_csv(std::ostream& out, const std::vector<IdentifiabilityRow>& rows);

// Writes the resolved config and a provenance stamp next to the results.
void stamp_output_dir(const std::filesystem::path& dir, const ExperimentConfig& config);

}  // namespace noisytree
