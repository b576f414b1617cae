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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "noisytree/evalkit.hpp"
#include "noisytree/experiment.hpp"
#include "noisytree/io.hpp"
#include "noisytree/recovery.hpp"
#include "noisytree/rng.hpp"
#include "noisytree/sampler.hpp"

namespace fs = std::filesystem;
using namespace noisytree;

namespace {

constexpr int kConfigExit = 2;
constexpr int kRecoveryExit = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool exact_pmf = false;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "experiment config (INI)");
  app->add_option("--seed", c.seed, "override run.seed");
  app->add_option("--out", c.out, "output directory");
  app->add_flag("--exact-pmf", c.exact_pmf, "use exact noisy pairwise PMFs instead of samples");
  app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig config = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) config.seed = *c.seed;
  if (c.exact_pmf) config.exact_pmf = true;
  if (c.threads) config.threads = *c.threads;
  if (!c.out.empty()) config.out_dir = c.out;
  config.validate();
  return config;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  return in;
}

struct Inputs {
  std::string model;
  std::string noise;
  std::string samples;
  std::string pmfs;
};

void add_inputs(CLI::App* app, Inputs& in) {
  app->add_option("--model", in.model, "model JSON");
  app->add_option("--noise", in.noise, "noise JSON (default: drawn from the config rule)");
  app->add_option("--samples", in.samples, "binary sample file");
  app->add_option("--pmfs", in.pmfs, "binary pairwise PMF file");
}

struct Loaded {
  std::optional<TreeModel> model;
  NoiseSpec noise;
  PairwisePmfSet pmfs;
};

NoiseSpec noise_for(const ExperimentConfig& config, const Inputs& in, int n) {
  if (!in.noise.empty()) return noise_from_json(read_file(in.noise));
  return draw_noise(config.rule, config.q_max.front(), n, derive_seed(config.seed, seed_tag::kNoise, 0));
}

Loaded load_inputs(const ExperimentConfig& config, const Inputs& in) {
  const int given = !in.model.empty() + !in.samples.empty() + !in.pmfs.empty();
  if (given != 1) throw ConfigError("give exactly one of --model, --samples, --pmfs");
  if (!in.samples.empty()) {
    auto f = open_in(in.samples);
    const auto samples = read_samples_binary(f);
    const NoiseSpec noise{std::vector<double>(samples.nodes(), 0.0), config.q_max.front()};
    return {std::nullopt, noise, empirical_pairwise(samples, samples.k())};
  }
  if (!in.pmfs.empty()) {
    auto f = open_in(in.pmfs);
    auto pmfs = read_pmfs_binary(f);
    const NoiseSpec noise{std::vector<double>(pmfs.size(), 0.0), config.q_max.front()};
    return {std::nullopt, noise, std::move(pmfs)};
  }
  TreeModel model = model_from_json(read_file(in.model));
  const NoiseSpec noise = noise_for(config, in, model.size());
  if (config.exact_pmf) {
    auto pmfs = exact_pairwise_set(model, noise);
    return {std::move(model), noise, std::move(pmfs)};
  }
  const std::uint64_t n_samples = config.sample_sizes.front();
  const auto clean = sample_clean(model, n_samples, derive_seed(config.seed, seed_tag::kSample, 0, n_samples), config.threads);
  const auto noisy = apply_noise(clean, noise, derive_seed(config.seed, seed_tag::kChannel, 0, n_samples), config.threads);
  auto pmfs = empirical_pairwise(noisy, model.k());
  return {std::move(model), noise, std::move(pmfs)};
}

void write_metrics(const fs::path& path, const std::string& algorithm, const Loaded& data, const Tree& out,
                   double q_max) {
  std::ofstream f = open_out(path);
  f << "algorithm,N,exact,eq_class,in_t_sub\n";
  f << algorithm << ',' << data.pmfs.sample_count() << ',';
  if (data.model) {
    const auto flags = ground_truth_flags(*data.model, data.noise, q_max);
    const auto score = score_trial(data.model->tree(), flags, out);
    f << score.exact << ',' << score.eq_class << ',' << score.in_t_sub << '\n';
  } else {
    f << ",,\n";
  }
}

int cmd_gen_model(const Common& c) {
  const auto config = resolve(c);
  const auto grid = sweep_grid(config);
  const Tree tree = config.family == ModelFamily::kFile ? Tree() : build_tree(config);
  const TreeModel model = build_model(config, grid.front(), tree);
  const NoiseSpec noise = draw_noise(config.rule, grid.front().q_max, model.size(), derive_seed(config.seed, seed_tag::kNoise, 0));
  stamp_output_dir(config.out_dir, config);
  write_file(config.out_dir / "model.json", model_to_json(model));
  write_file(config.out_dir / "noise.json", noise_to_json(noise));
  std::cout << (config.out_dir / "model.json").string() << '\n';
  return 0;
}

int cmd_sample(const Common& c, const Inputs& in, bool csv) {
  const auto config = resolve(c);
  if (in.model.empty()) throw ConfigError("sample needs --model");
  const TreeModel model = model_from_json(read_file(in.model));
  const NoiseSpec noise = noise_for(config, in, model.size());
  const std::uint64_t n_samples = config.sample_sizes.front();
  const auto clean = sample_clean(model, n_samples, derive_seed(config.seed, seed_tag::kSample, 0, n_samples), config.threads);
  const auto noisy = apply_noise(clean, noise, derive_seed(config.seed, seed_tag::kChannel, 0, n_samples), config.threads);
  stamp_output_dir(config.out_dir, config);
  {
    auto f = open_out(config.out_dir / "samples.bin");
    write_samples_binary(f, noisy);
  }
  if (csv) {
    auto f = open_out(config.out_dir / "samples.csv");
    write_samples_csv(f, noisy);
  }
  auto f = open_out(config.out_dir / "pmfs.bin");
  write_pmfs_binary(f, empirical_pairwise(noisy, model.k()));
  write_file(config.out_dir / "noise.json", noise_to_json(noise));
  return 0;
}

int cmd_recover(const Common& c, const Inputs& in, bool expand) {
  const auto config = resolve(c);
  const Loaded data = load_inputs(config, in);
  const double q_max = data.noise.q_max;
  AlgoParams params = data.model ? resolve_params(config, *data.model, data.noise)
                                 : params_from_data(config, data.pmfs, q_max);
  params.seed = config.seed;
  RecoveredStructure structure = find_tree(data.pmfs, params);
  if (expand && params.t0) structure = expand_equivalence_class(std::move(structure), data.pmfs, params);
  stamp_output_dir(config.out_dir, config);
  write_file(config.out_dir / "structure.json", structure_to_json(structure));
  write_file(config.out_dir / "edges.txt", edge_list_text(structure.tree));
  write_metrics(config.out_dir / "metrics.csv", "ours", data, structure.tree, q_max);
  std::cout << edge_list_text(structure.tree);
  return 0;
}

int cmd_chowliu(const Common& c, const Inputs& in) {
  const auto config = resolve(c);
  const Loaded data = load_inputs(config, in);
  const Tree tree = chow_liu(data.pmfs);
  stamp_output_dir(config.out_dir, config);
  write_file(config.out_dir / "edges.txt", edge_list_text(tree));
  write_metrics(config.out_dir / "metrics.csv", "chow_liu", data, tree, data.noise.q_max);
  std::cout << edge_list_text(tree);
  return 0;
}

int cmd_sweep(const Common& c) {
  const auto config = resolve(c);
  const auto result = run_sweep(config);
  stamp_output_dir(config.out_dir, config);
  {
    auto f = open_out(config.out_dir / "sweep.csv");
    write_sweep_csv(f, result.rows);
  }
  auto f = open_out(config.out_dir / "trials.csv");
  write_trials_csv(f, result.trials);
  int failed = 0;
  for (const auto& row : result.rows) failed += row.failed_trials;
  std::cout << result.rows.size() << " rows, " << failed << " failed trials -> "
            << (config.out_dir / "sweep.csv").string() << '\n';
  return 0;
}

int cmd_identifiability(const Common& c) {
  const auto config = resolve(c);
  const auto rows = run_identifiability(config);
  stamp_output_dir(config.out_dir, config);
  auto f = open_out(config.out_dir / "identifiability.csv");
  write_identifiability_csv(f, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree structure learning from noisy samples"};
  app.require_subcommand(1);
  Common common;
  Inputs inputs;
  bool csv = false;
  bool expand = false;

  auto* gen = app.add_subcommand("gen-model", "write a model (and a noise draw) from a config");
  add_common(gen, common);
  auto* sample = app.add_subcommand("sample", "draw noisy samples from a model");
  add_common(sample, common);
  add_inputs(sample, inputs);
  sample->add_flag("--csv", csv, "also write samples.csv");
  auto* recover = app.add_subcommand("recover", "recover the tree from a model, samples or PMFs");
  add_common(recover, common);
  add_inputs(recover, inputs);
  recover->add_flag("--expand", expand, "flag candidate parents of each leaf cluster (needs t0)");
  auto* cl = app.add_subcommand("chowliu", "Chow-Liu baseline");
  add_common(cl, common);
  add_inputs(cl, inputs);
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over a parameter grid");
  add_common(sweep, common);
  auto* ident = app.add_subcommand("identifiability", "center-test phase map on a 3-node chain");
  add_common(ident, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*gen) return cmd_gen_model(common);
    if (*sample) return cmd_sample(common, inputs, csv);
    if (*recover) return cmd_recover(common, inputs, expand);
    if (*cl) return cmd_chowliu(common, inputs);
    if (*sweep) return cmd_sweep(common);
    if (*ident) return cmd_identifiability(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const RecoveryError& e) {
    std::cerr << "recovery failed: " << e.what() << '\n';
    return kRecoveryExit;
  } catch (const SingularMatrixError& e) {
    std::cerr << "recovery failed: " << e.what() << '\n';
    return kRecoveryExit;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
