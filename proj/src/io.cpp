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

#include "noisytree/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace noisytree {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

std::string dump(const json& j) {
  // nlohmann prints doubles with max_digits10 already; keep the output stable.
  return j.dump(2) + "\n";
}

json matrix_rows(const Matrix& m) {
  json flat = json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) flat.push_back(m(a, b));
  }
  return flat;
}

Matrix matrix_from(const json& flat, int k) {
  if (!flat.is_array() || static_cast<int>(flat.size()) != k * k) throw InvalidArgument("matrix needs k*k entries");
  Matrix m(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) m(a, b) = flat.at(a * k + b).get<double>();
  }
  return m;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw InvalidArgument("truncated binary input");
  return value;
}

constexpr char kPmfMagic[8] = {'N', 'T', 'P', 'M', 'F', '0', '0', '1'};

}  // namespace

std::string model_to_json(const TreeModel& model) {
  json j;
  j["k"] = model.k();
  j["root"] = model.root();
  j["n"] = model.size();
  j["root_marginal"] = std::vector<double>(model.root_marginal().data(),
                                           model.root_marginal().data() + model.root_marginal().size());
  json edges = json::array();
  for (auto [a, b] : model.tree().edges()) edges.push_back({a, b});
  j["edges"] = edges;
  json conditionals = json::object();
  for (int v = 0; v < model.size(); ++v) {
    if (v == model.root()) continue;
    conditionals[std::to_string(model.parent(v)) + "-" + std::to_string(v)] = matrix_rows(model.conditional(v));
  }
  j["conditionals"] = conditionals;
  return dump(j);
}

TreeModel model_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    const int k = j.at("k").get<int>();
    const int root = j.at("root").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    const int n = j.contains("n") ? j.at("n").get<int>() : static_cast<int>(edges.size()) + 1;
    Tree tree(n, edges);
    const auto marginal = j.at("root_marginal").get<std::vector<double>>();
    Vector root_marginal = Eigen::Map<const Vector>(marginal.data(), static_cast<Eigen::Index>(marginal.size()));
    const auto [parent, order] = tree.rooted(root);
    std::vector<Matrix> conditionals(n);
    for (int v = 0; v < n; ++v) {
      if (v == root) continue;
      const std::string key = std::to_string(parent[v]) + "-" + std::to_string(v);
      if (!j.at("conditionals").contains(key)) throw InvalidArgument("missing conditional " + key);
      conditionals[v] = matrix_from(j.at("conditionals").at(key), k);
    }
    return TreeModel(std::move(tree), k, root, std::move(root_marginal), std::move(conditionals));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad model document: ") + e.what());
  }
}

std::string noise_to_json(const NoiseSpec& noise) {
  json j;
  j["q"] = noise.q;
  j["q_max"] = noise.q_max;
  return dump(j);
}

NoiseSpec noise_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    NoiseSpec noise{j.at("q").get<std::vector<double>>(), j.at("q_max").get<double>()};
    noise.validate();
    return noise;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad noise document: ") + e.what());
  }
}

std::string pmfs_to_json(const PairwisePmfSet& pmfs) {
  json j;
  j["n"] = pmfs.size();
  j["k"] = pmfs.k();
  j["source"] = pmfs.source() == PmfSource::kExact ? "exact" : "empirical";
  j["sample_count"] = pmfs.sample_count();
  json pairs = json::array();
  const int n = pmfs.size();
  for (int i = 0; i < n; ++i) {
    for (int jj = i + 1; jj < n; ++jj) {
      pairs.push_back({{"i", i}, {"j", jj}, {"p", matrix_rows(pmfs.stored(pmfs.pair_index(i, jj)))}});
    }
  }
  j["pairs"] = pairs;
  return dump(j);
}

PairwisePmfSet pmfs_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const std::string source = j.at("source").get<std::string>();
    if (source != "exact" && source != "empirical") throw InvalidArgument("unknown PMF source " + source);
    std::vector<Matrix> mats(PairwisePmfSet::pair_count(n));
    std::vector<char> seen(mats.size(), 0);
    for (const auto& p : j.at("pairs")) {
      const int i = p.at("i").get<int>();
      const int jj = p.at("j").get<int>();
      if (!(0 <= i && i < jj && jj < n)) throw InvalidArgument("pair indices must satisfy 0 <= i < j < n");
      const int idx = i * n - i * (i + 1) / 2 + (jj - i - 1);
      mats[idx] = matrix_from(p.at("p"), k);
      seen[idx] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw InvalidArgument("PMF set is missing pairs");
    return PairwisePmfSet(n, k, source == "exact" ? PmfSource::kExact : PmfSource::kEmpirical,
                          j.at("sample_count").get<std::uint64_t>(), std::move(mats));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad PMF document: ") + e.what());
  }
}

void write_pmfs_binary(std::ostream& out, const PairwisePmfSet& pmfs) {
  out.write(kPmfMagic, sizeof(kPmfMagic));
  put<std::uint32_t>(out, pmfs.size());
  put<std::uint32_t>(out, pmfs.k());
  put<std::uint32_t>(out, pmfs.source() == PmfSource::kExact ? 0 : 1);
  put<std::uint64_t>(out, pmfs.sample_count());
  const int n = pmfs.size();
  const int k = pmfs.k();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      put<std::uint32_t>(out, i);
      put<std::uint32_t>(out, j);
      const Matrix& m = pmfs.stored(pmfs.pair_index(i, j));
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) put<double>(out, m(a, b));
      }
    }
  }
}

PairwisePmfSet read_pmfs_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kPmfMagic, sizeof(magic)) != 0) {
    throw InvalidArgument("not a binary PMF file");
  }
  const auto n = static_cast<int>(get<std::uint32_t>(in));
  const auto k = static_cast<int>(get<std::uint32_t>(in));
  const auto source = get<std::uint32_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (n < 2 || k < 2 || k > kMaxSupport || source > 1) throw InvalidArgument("bad binary PMF header");
  std::vector<Matrix> mats;
  mats.reserve(PairwisePmfSet::pair_count(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (static_cast<int>(get<std::uint32_t>(in)) != i || static_cast<int>(get<std::uint32_t>(in)) != j) {
        throw InvalidArgument("binary PMF pairs out of order");
      }
      Matrix m(k, k);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) m(a, b) = get<double>(in);
      }
      mats.push_back(std::move(m));
    }
  }
  return PairwisePmfSet(n, k, source == 0 ? PmfSource::kExact : PmfSource::kEmpirical, count, std::move(mats));
}

void write_samples_binary(std::ostream& out, const SampleMatrix& samples) {
  put<std::uint64_t>(out, samples.rows());
  put<std::uint32_t>(out, samples.nodes());
  put<std::uint32_t>(out, samples.k());
  out.write(reinterpret_cast<const char*>(samples.values().data()),
            static_cast<std::streamsize>(samples.values().size()));
}

SampleMatrix read_samples_binary(std::istream& in) {
  const auto rows = get<std::uint64_t>(in);
  const auto nodes = static_cast<int>(get<std::uint32_t>(in));
  const auto k = static_cast<int>(get<std::uint32_t>(in));
  if (nodes < 1 || nodes > (1 << 20)) throw InvalidArgument("bad sample header");
  std::vector<std::uint8_t> values(rows * static_cast<std::uint64_t>(nodes));
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size()))) {
    throw InvalidArgument("truncated sample file");
  }
  return SampleMatrix(rows, nodes, k, std::move(values));
}

void write_samples_csv(std::ostream& out, const SampleMatrix& samples) {
  for (int v = 0; v < samples.nodes(); ++v) out << (v ? "," : "") << 'x' << v;
  out << '\n';
  for (std::uint64_t s = 0; s < samples.rows(); ++s) {
    for (int v = 0; v < samples.nodes(); ++v) out << (v ? "," : "") << static_cast<int>(samples(s, v));
    out << '\n';
  }
}

std::string structure_to_json(const RecoveredStructure& structure) {
  json j;
  j["n"] = structure.tree.size();
  json edges = json::array();
  for (auto [a, b] : structure.tree.edges()) edges.push_back({a, b});
  j["edges"] = edges;
  j["parents"] = structure.parents;
  json clusters = json::array();
  for (const auto& c : structure.clusters) {
    clusters.push_back({{"members", c.members}, {"candidate_parents", c.candidate_parents}, {"determined", c.determined}});
  }
  j["clusters"] = clusters;
  return dump(j);
}

RecoveredStructure structure_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    RecoveredStructure s{Tree(j.at("n").get<int>(), edges), j.at("parents").get<std::vector<int>>(), {}};
    for (const auto& c : j.at("clusters")) {
      s.clusters.push_back({c.at("members").get<std::vector<int>>(), c.at("candidate_parents").get<std::vector<int>>(),
                            c.at("determined").get<bool>()});
    }
    return s;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad structure document: ") + e.what());
  }
}

std::string edge_list_text(const Tree& tree) {
  std::ostringstream out;
  for (auto [a, b] : tree.edges()) out << a << ' ' << b << '\n';
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

}  // namespace noisytree
