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

#include "noisytree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "noisytree/io.hpp"
#include "noisytree/metric.hpp"
#include "noisytree/oracle.hpp"
#include "noisytree/quadtest.hpp"
#include "noisytree/recovery.hpp"
#include "noisytree/rng.hpp"
#include "noisytree/sampler.hpp"

#ifndef NOISYTREE_GIT_DESCRIBE
#define NOISYTREE_GIT_DESCRIBE "unknown"
#endif

namespace noisytree {

namespace {

namespace pt = boost::property_tree;

using namespace seed_tag;

std::string fmt(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": not a number: '" + s + "'");
  return x;
}

std::int64_t to_int(const std::string& key, const std::string& s) {
  // Accept 1e5-style sample sizes as long as they are integral.
  const double x = to_double(key, s);
  if (x != static_cast<double>(static_cast<std::int64_t>(x))) throw ConfigError(key + ": not an integer: '" + s + "'");
  return static_cast<std::int64_t>(x);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> double_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(key, item));
  return out;
}

template <typename T>
T pick(const std::string& key, const std::string& s, const std::map<std::string, T>& options) {
  const auto it = options.find(s);
  if (it == options.end()) {
    std::string allowed;
    for (const auto& [name, v] : options) allowed += (allowed.empty() ? "" : "|") + name;
    throw ConfigError(key + ": expected one of " + allowed + ", got '" + s + "'");
  }
  return it->second;
}

template <typename T>
std::string name_of(T value, const std::map<std::string, T>& options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  return "?";
}

const std::map<std::string, ModelFamily> kFamilies{
    {"symmetric", ModelFamily::kSymmetric}, {"perturbed", ModelFamily::kPerturbed}, {"file", ModelFamily::kFile}};
const std::map<std::string, TreeShape> kShapes{
    {"chain", TreeShape::kChain}, {"star", TreeShape::kStar}, {"random", TreeShape::kRandom}, {"file", TreeShape::kFile}};
const std::map<std::string, NoiseRule> kRules{
    {"none", NoiseRule::kNone}, {"uniform", NoiseRule::kUniform}, {"alternate", NoiseRule::kAlternate}};
const std::map<std::string, DistanceReading> kReadings{{"plain", DistanceReading::kPlain},
                                                       {"exp", DistanceReading::kExp}};

const std::map<std::string, std::set<std::string>> kKnownKeys{
    {"model", {"family", "shape", "n", "k", "distances", "distance_reading", "deltas", "offset", "model_file", "tree_file"}},
    {"noise", {"q_max", "rule"}},
    {"run", {"sample_sizes", "trials", "seed", "exact_pmf", "threads", "chow_liu", "out"}},
    {"algo", {"d_min", "d_max", "p_min", "bound_margin", "t0", "neighborhood_multiplier", "root_tol", "randomize_init"}},
    {"identifiability", {"k", "alpha", "delta", "q", "tol"}}};

Tree read_tree_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<Edge> edges;
  int a = 0;
  int b = 0;
  while (in >> a >> b) edges.emplace_back(a, b);
  return Tree(static_cast<int>(edges.size()) + 1, std::move(edges));
}

}  // namespace

const char* git_describe() { return NOISYTREE_GIT_DESCRIBE; }

void ExperimentConfig::validate() const {
  if (family != ModelFamily::kFile) {
    if (n < 2) throw ConfigError("model.n must be at least 2");
    if (k < 2 || k > kMaxSupport) throw ConfigError("model.k out of range");
  }
  if (distances.empty() || deltas.empty() || q_max.empty() || sample_sizes.empty()) {
    throw ConfigError("every grid must be nonempty");
  }
  if (trials < 1) throw ConfigError("run.trials must be at least 1");
  for (double d : distances) {
    if (!(d > 0.0)) throw ConfigError("model.distances must be positive");
  }
  for (double q : q_max) {
    if (!(q >= 0.0 && q < 1.0)) throw ConfigError("noise.q_max must lie in [0, 1)");
  }
  for (auto s : sample_sizes) {
    if (s < 1) throw ConfigError("run.sample_sizes must be positive");
  }
  if (family == ModelFamily::kPerturbed && (offset <= 0 || offset >= k)) throw ConfigError("model.offset must be in (0, k)");
  if (family == ModelFamily::kFile && !std::filesystem::exists(model_file)) {
    throw ConfigError("model file not found: " + model_file.string());
  }
  if (shape == TreeShape::kFile && family != ModelFamily::kFile && !std::filesystem::exists(tree_file)) {
    throw ConfigError("tree file not found: " + tree_file.string());
  }
  if (id_k.empty() || id_alpha.empty() || id_delta.empty() || id_q.empty()) {
    throw ConfigError("every identifiability grid must be nonempty");
  }
  if (t0_mode == T0Mode::kFixed && !(t0 > 0.0)) throw ConfigError("algo.t0 must be positive");
  if (!(neighborhood_multiplier > 0.0)) throw ConfigError("algo.neighborhood_multiplier must be positive");
  if (!(bound_margin >= 0.0 && bound_margin < 1.0)) throw ConfigError("algo.bound_margin must lie in [0, 1)");
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, node] : body) {
      if (!known->second.count(key)) throw ConfigError("unknown key " + section + "." + key);
      const std::string full = section + "." + key;
      const std::string v = trim(node.get_value<std::string>());
      if (section == "model") {
        if (key == "family") c.family = pick(full, v, kFamilies);
        if (key == "shape") c.shape = pick(full, v, kShapes);
        if (key == "n") c.n = static_cast<int>(to_int(full, v));
        if (key == "k") c.k = static_cast<int>(to_int(full, v));
        if (key == "distances") c.distances = double_list(full, v);
        if (key == "distance_reading") c.distance_reading = pick(full, v, kReadings);
        if (key == "deltas") c.deltas = double_list(full, v);
        if (key == "offset") c.offset = static_cast<int>(to_int(full, v));
        if (key == "model_file") c.model_file = (base_dir / v).lexically_normal();
        if (key == "tree_file") c.tree_file = (base_dir / v).lexically_normal();
      } else if (section == "noise") {
        if (key == "q_max") c.q_max = double_list(full, v);
        if (key == "rule") c.rule = pick(full, v, kRules);
      } else if (section == "run") {
        if (key == "sample_sizes") {
          c.sample_sizes.clear();
          for (const auto& item : split_list(v)) c.sample_sizes.push_back(static_cast<std::uint64_t>(to_int(full, item)));
        }
        if (key == "trials") c.trials = static_cast<int>(to_int(full, v));
        if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(full, v));
        if (key == "exact_pmf") c.exact_pmf = to_bool(full, v);
        if (key == "threads") c.threads = static_cast<unsigned>(to_int(full, v));
        if (key == "chow_liu") c.chow_liu = to_bool(full, v);
        if (key == "out") c.out_dir = (base_dir / v).lexically_normal();
      } else if (section == "algo") {
        if (key == "d_min") c.d_min = to_double(full, v);
        if (key == "d_max") c.d_max = to_double(full, v);
        if (key == "p_min") c.p_min = to_double(full, v);
        if (key == "bound_margin") c.bound_margin = to_double(full, v);
        if (key == "t0") {
          if (v == "none") {
            c.t0_mode = T0Mode::kNone;
          } else if (v == "population") {
            c.t0_mode = T0Mode::kPopulation;
          } else {
            c.t0_mode = T0Mode::kFixed;
            c.t0 = to_double(full, v);
          }
        }
        if (key == "neighborhood_multiplier") c.neighborhood_multiplier = to_double(full, v);
        if (key == "root_tol") c.root_tol = to_double(full, v);
        if (key == "randomize_init") c.randomize_init = to_bool(full, v);
      } else if (section == "identifiability") {
        if (key == "k") {
          c.id_k.clear();
          for (const auto& item : split_list(v)) c.id_k.push_back(static_cast<int>(to_int(full, item)));
        }
        if (key == "alpha") c.id_alpha = double_list(full, v);
        if (key == "delta") c.id_delta = double_list(full, v);
        if (key == "q") c.id_q = double_list(full, v);
        if (key == "tol") c.id_tol = to_double(full, v);
      }
    }
  }
  if (c.family == ModelFamily::kFile) {
    try {
      const auto model = model_from_json(read_file(c.model_file));
      c.n = model.size();
      c.k = model.k();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("model file: ") + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config not found: " + path.string());
  return parse_config(read_file(path), path.parent_path());
}

std::string config_to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto list = [](const auto& values) {
    std::string s;
    for (const auto& v : values) {
      if (!s.empty()) s += ", ";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
        s += fmt(v);
      } else {
        s += std::to_string(v);
      }
    }
    return s;
  };
  out << "[model]\n"
      << "family = " << name_of(c.family, kFamilies) << "\n"
      << "shape = " << name_of(c.shape, kShapes) << "\n"
      << "n = " << c.n << "\n"
      << "k = " << c.k << "\n"
      << "distances = " << list(c.distances) << "\n"
      << "distance_reading = " << name_of(c.distance_reading, kReadings) << "\n"
      << "deltas = " << list(c.deltas) << "\n"
      << "offset = " << c.offset << "\n";
  if (!c.model_file.empty()) out << "model_file = " << c.model_file.string() << "\n";
  if (!c.tree_file.empty()) out << "tree_file = " << c.tree_file.string() << "\n";
  out << "\n[noise]\n"
      << "q_max = " << list(c.q_max) << "\n"
      << "rule = " << name_of(c.rule, kRules) << "\n"
      << "\n[run]\n"
      << "sample_sizes = " << list(c.sample_sizes) << "\n"
      << "trials = " << c.trials << "\n"
      << "seed = " << c.seed << "\n"
      << "exact_pmf = " << (c.exact_pmf ? "true" : "false") << "\n"
      << "threads = " << c.threads << "\n"
      << "chow_liu = " << (c.chow_liu ? "true" : "false") << "\n"
      << "out = " << c.out_dir.string() << "\n"
      << "\n[algo]\n";
  if (c.d_min) out << "d_min = " << fmt(*c.d_min) << "\n";
  if (c.d_max) out << "d_max = " << fmt(*c.d_max) << "\n";
  if (c.p_min) out << "p_min = " << fmt(*c.p_min) << "\n";
  out << "bound_margin = " << fmt(c.bound_margin) << "\n"
      << "t0 = "
      << (c.t0_mode == T0Mode::kNone ? "none" : c.t0_mode == T0Mode::kPopulation ? "population" : fmt(c.t0)) << "\n"
      << "neighborhood_multiplier = " << fmt(c.neighborhood_multiplier) << "\n"
      << "root_tol = " << fmt(c.root_tol) << "\n"
      << "randomize_init = " << (c.randomize_init ? "true" : "false") << "\n"
      << "\n[identifiability]\n"
      << "k = " << list(c.id_k) << "\n"
      << "alpha = " << list(c.id_alpha) << "\n"
      << "delta = " << list(c.id_delta) << "\n"
      << "q = " << list(c.id_q) << "\n"
      << "tol = " << fmt(c.id_tol) << "\n";
  return out.str();
}

double edge_distance(const ExperimentConfig& config, double raw) {
  return config.distance_reading == DistanceReading::kExp ? std::exp(-raw) : raw;
}

std::vector<GridPoint> sweep_grid(const ExperimentConfig& config) {
  std::vector<GridPoint> out;
  const bool fixed_model = config.family == ModelFamily::kFile;
  const std::vector<double> distances = fixed_model ? std::vector<double>{0.0} : config.distances;
  const std::vector<double> deltas =
      config.family == ModelFamily::kPerturbed ? config.deltas : std::vector<double>{0.0};
  for (double d : distances) {
    for (double delta : deltas) {
      for (double q : config.q_max) {
        std::ostringstream id;
        id << "shape=" << name_of(config.shape, kShapes) << ";family=" << name_of(config.family, kFamilies)
           << ";k=" << config.k << ";n=" << config.n;
        if (!fixed_model) id << ";d=" << fmt(d);
        if (config.family == ModelFamily::kPerturbed) id << ";delta=" << fmt(delta);
        id << ";q_max=" << fmt(q);
        out.push_back({out.size(), d, delta, q, id.str()});
      }
    }
  }
  return out;
}

Tree build_tree(const ExperimentConfig& config) {
  switch (config.shape) {
    case TreeShape::kChain:
      return chain_tree(config.n);
    case TreeShape::kStar:
      return star_tree(config.n, 0);
    case TreeShape::kRandom: {
      std::mt19937_64 rng(derive_seed(config.seed, kTree));
      return random_tree(config.n, rng);
    }
    case TreeShape::kFile:
      return read_tree_file(config.tree_file);
  }
  throw ConfigError("unknown tree shape");
}

TreeModel build_model(const ExperimentConfig& config, const GridPoint& point, const Tree& tree) {
  if (config.family == ModelFamily::kFile) return model_from_json(read_file(config.model_file));
  const double d = edge_distance(config, point.distance);
  const std::size_t edges = tree.edges().size();
  if (config.family == ModelFamily::kSymmetric || point.delta == 0.0) {
    return build_symmetric_model(tree, config.k, std::vector<double>(edges, alpha_for_distance(config.k, d)));
  }
  const double alpha = alpha_for_distance(config.k, d, point.delta, config.offset);
  return build_perturbed_symmetric_model(tree, config.k,
                                         std::vector<PerturbedEdge>(edges, {alpha, point.delta, config.offset}));
}

NoiseSpec draw_noise(NoiseRule rule, double q_max, int n, std::uint64_t seed) {
  NoiseSpec noise{std::vector<double>(n, 0.0), q_max};
  for (int v = 0; v < n; ++v) {
    switch (rule) {
      case NoiseRule::kNone:
        break;
      case NoiseRule::kUniform:
        noise.q[v] = q_max * counter_uniform(seed, kNoise, v, 0);
        break;
      case NoiseRule::kAlternate:
        // Odd labels when counting nodes from 1.
        noise.q[v] = v % 2 == 0 ? q_max : 0.0;
        break;
    }
  }
  return noise;
}

AlgoParams resolve_params(const ExperimentConfig& config, const TreeModel& model, const NoiseSpec& noise) {
  AlgoParams p;
  const auto marginals = exact_marginals(model);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (auto [a, b] : model.tree().edges()) {
    const double d = info_distance(exact_pairwise_pmf(model, a, b), marginals[a], marginals[b]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  p.d_min = config.d_min.value_or(lo * (1.0 - config.bound_margin));
  p.d_max = config.d_max.value_or(hi * (1.0 + config.bound_margin));
  if (!(p.d_max > p.d_min)) p.d_max = p.d_min * (1.0 + 1e-9) + 1e-12;
  double mass = 1.0;
  for (const auto& m : marginals) mass = std::min(mass, m.minCoeff());
  p.p_min = config.p_min.value_or(std::min(mass, 1.0 / model.k()));
  p.q_max = noise.q_max;
  switch (config.t0_mode) {
    case T0Mode::kNone:
      break;
    case T0Mode::kFixed:
      p.t0 = config.t0;
      break;
    case T0Mode::kPopulation:
      p.t0 = population_t0(model, noise, noise.q_max);
      break;
  }
  p.root_tol = config.root_tol;
  p.neighborhood_multiplier = config.neighborhood_multiplier;
  p.randomize_init = config.randomize_init;
  return p;
}

AlgoParams params_from_data(const ExperimentConfig& config, const PairwisePmfSet& pmfs, double q_max) {
  const int k = pmfs.k();
  std::vector<Vector> marginals;
  for (int v = 0; v < pmfs.size(); ++v) marginals.push_back(pmfs.marginal(v));
  const DistanceTable dist = distance_table(pmfs);
  AlgoParams p;
  p.q_max = q_max;
  const auto rough = estimate_bounds(dist, 0.0, q_max, marginals);
  p.p_min = config.p_min.value_or(std::min(rough.p_min_lower.value_or(1e-3), 1.0 / k));
  const auto est = estimate_bounds(dist, eta_max(k, q_max, p.p_min), q_max, marginals);
  p.d_max = config.d_max.value_or(est.d_max_upper * (1.0 + config.bound_margin));
  // No usable lower bound: half the smallest nearest-neighbour distance.
  double nearest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dist.n; ++i) {
    for (int j = 0; j < dist.n; ++j) {
      if (i != j) nearest = std::min(nearest, dist.d(i, j));
    }
  }
  p.d_min = config.d_min.value_or(est.d_min_lower.value_or(0.5 * nearest));
  if (config.t0_mode == T0Mode::kFixed) p.t0 = config.t0;
  p.root_tol = config.root_tol;
  p.neighborhood_multiplier = config.neighborhood_multiplier;
  p.randomize_init = config.randomize_init;
  p.seed = config.seed;
  return p;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto grid = sweep_grid(config);
  const Tree tree = config.family == ModelFamily::kFile ? Tree() : build_tree(config);
  std::vector<TreeModel> models;
  for (const auto& point : grid) {
    try {
      models.push_back(build_model(config, point, tree));
    } catch (const InvalidArgument& e) {
      throw ConfigError("grid point " + point.setting + ": " + e.what());
    }
  }
  const std::vector<std::uint64_t> sizes = config.exact_pmf ? std::vector<std::uint64_t>{0} : config.sample_sizes;
  std::vector<std::string> algorithms{"ours"};
  if (config.chow_liu) algorithms.push_back("chow_liu");
  const std::size_t per_task = sizes.size() * algorithms.size();
  const std::size_t tasks = grid.size() * static_cast<std::size_t>(config.trials);
  std::vector<TrialRecord> records(tasks * per_task);

  const auto run_task = [&](std::size_t task) {
    const std::size_t g = task / config.trials;
    const int trial = static_cast<int>(task % config.trials);
    const TreeModel& model = models[g];
    const NoiseSpec noise = draw_noise(config.rule, grid[g].q_max, model.size(), derive_seed(config.seed, kNoise, trial));
    AlgoParams params = resolve_params(config, model, noise);
    params.seed = derive_seed(config.seed, kAlgo, trial);
    const auto flags = ground_truth_flags(model, noise, params.q_max);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const std::uint64_t n_samples = sizes[s];
      std::optional<PairwisePmfSet> pmfs;
      std::string failure;
      try {
        if (config.exact_pmf) {
          pmfs = exact_pairwise_set(model, noise);
        } else {
          const auto clean = sample_clean(model, n_samples, derive_seed(config.seed, kSample, trial, n_samples));
          const auto noisy = apply_noise(clean, noise, derive_seed(config.seed, kChannel, trial, n_samples));
          pmfs = empirical_pairwise(noisy, model.k());
        }
      } catch (const Error& e) {
        failure = e.what();
      }
      for (std::size_t a = 0; a < algorithms.size(); ++a) {
        TrialRecord& r = records[task * per_task + s * algorithms.size() + a];
        r.setting = grid[g].setting;
        r.trial = trial;
        r.algorithm = algorithms[a];
        r.n_samples = n_samples;
        if (!pmfs) {
          r.failed = true;
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
          const Tree out = a == 0 ? find_tree(*pmfs, params).tree : chow_liu(*pmfs);
          r.score = score_trial(model.tree(), flags, out);
        } catch (const Error&) {
          r.failed = true;
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t task = next++; task < tasks; task = next++) run_task(task);
      });
    }
  }

  SweepResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      for (std::size_t a = 0; a < algorithms.size(); ++a) {
        SweepRow row{grid[g].setting, sizes[s], algorithms[a]};
        int exact = 0;
        int eq = 0;
        int sub = 0;
        for (int trial = 0; trial < config.trials; ++trial) {
          const auto& r = records[(g * config.trials + trial) * per_task + s * algorithms.size() + a];
          exact += r.score.exact;
          eq += r.score.eq_class;
          sub += r.score.in_t_sub;
          row.failed_trials += r.failed;
        }
        row.fraction_exact = static_cast<double>(exact) / config.trials;
        row.fraction_eq_class = static_cast<double>(eq) / config.trials;
        row.fraction_in_t_sub = static_cast<double>(sub) / config.trials;
        result.rows.push_back(std::move(row));
      }
    }
  }
  result.trials = std::move(records);
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "setting,N,fraction_exact,fraction_eq_class,algorithm,fraction_in_t_sub,failed_trials\n";
  for (const auto& r : rows) {
    out << r.setting << ',' << r.n_samples << ',' << fmt(r.fraction_exact) << ',' << fmt(r.fraction_eq_class) << ','
        << r.algorithm << ',' << fmt(r.fraction_in_t_sub) << ',' << r.failed_trials << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "setting,trial,algorithm,N,exact,eq_class,in_t_sub,failed,wall_ms\n";
  for (const auto& r : trials) {
    out << r.setting << ',' << r.trial << ',' << r.algorithm << ',' << r.n_samples << ',' << r.score.exact << ','
        << r.score.eq_class << ',' << r.score.in_t_sub << ',' << r.failed << ',' << fmt(r.wall_ms) << '\n';
  }
}

std::vector<IdentifiabilityRow> run_identifiability(const ExperimentConfig& config) {
  config.validate();
  std::vector<IdentifiabilityRow> rows;
  const RootPolicy policy{1.0, std::nullopt, config.id_tol};
  for (int k : config.id_k) {
    if (k < 2 || k > kMaxSupport) throw ConfigError("identifiability.k out of range");
    for (double alpha : config.id_alpha) {
      for (double delta : config.id_delta) {
        for (double q : config.id_q) {
          std::optional<TreeModel> model;
          try {
            const Tree chain = chain_tree(3);
            if (delta == 0.0) {
              model = build_symmetric_model(chain, k, {alpha, alpha});
            } else {
              const int offset = std::min(config.offset, k - 1);
              model = build_perturbed_symmetric_model(chain, k, {{alpha, delta, offset}, {alpha, delta, offset}});
            }
          } catch (const InvalidArgument&) {
            continue;  // parameters leave the simplex
          }
          const NoiseSpec noise{std::vector<double>(3, q), q};
          const auto pmfs = exact_pairwise_set(*model, noise);
          // Node 0 is a leaf of the chain 0-1-2 and node 1 its parent.
          for (const auto& [role, center] : {std::pair<const char*, int>{"leaf", 0}, {"parent", 1}}) {
            const Triplet triplet{0, 1, 2};
            const int a = center == 0 ? 1 : 0;
            const auto quad = quad_coefficients(pmfs, a, center, 2);
            const auto result = quadratic_error(quad, policy);
            const auto best = minimize_residual(quad, 0.0, 1.0);
            IdentifiabilityRow row{k, alpha, delta, q, role, result.mean_root, best.residual, best.residual < config.id_tol, 0.0};
            if (center == 0 && delta != 0.0 && k >= 4) row.floor = perturbed_leaf_residual_floor(k, alpha, delta, q);
            (void)triplet;
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return rows;
}

void write_identifiability_csv(std::ostream& out, const std::vector<IdentifiabilityRow>& rows) {
  out << "k,alpha,delta,q,center_role,mean_root,residual,feasible,floor\n";
  for (const auto& r : rows) {
    out << r.k << ',' << fmt(r.alpha) << ',' << fmt(r.delta) << ',' << fmt(r.q) << ',' << r.center_role << ','
        << fmt(r.mean_root) << ',' << fmt(r.residual) << ',' << (r.feasible ? 1 : 0) << ',' << fmt(r.floor) << '\n';
  }
}

void stamp_output_dir(const std::filesystem::path& dir, const ExperimentConfig& config) {
  std::filesystem::create_directories(dir);
  write_file(dir / "config.resolved.ini", config_to_text(config));
  write_file(dir / "provenance.txt", std::string("git_describe = ") + git_describe() + "\n");
}

}  // namespace noisytree
