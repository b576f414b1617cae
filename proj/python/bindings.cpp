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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "noisytree/evalkit.hpp"
#include "noisytree/experiment.hpp"
#include "noisytree/io.hpp"
#include "noisytree/metric.hpp"
#include "noisytree/quadtest.hpp"
#include "noisytree/recovery.hpp"
#include "noisytree/sampler.hpp"

namespace py = pybind11;
using namespace noisytree;

namespace {

py::array_t<std::uint8_t> samples_to_array(const SampleMatrix& s) {
  py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(s.rows()), static_cast<py::ssize_t>(s.nodes())});
  if (s.rows() > 0) std::memcpy(out.mutable_data(), s.values().data(), s.values().size());
  return out;
}

SampleMatrix array_to_samples(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> a, int k) {
  if (a.ndim() != 2) throw InvalidArgument("samples must be a 2-D array");
  std::vector<std::uint8_t> values(a.data(), a.data() + a.size());
  return SampleMatrix(a.shape(0), static_cast<int>(a.shape(1)), k, std::move(values));
}

}  // namespace

PYBIND11_MODULE(_noisytree, m) {
  m.doc() = "noisytree core";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
  py::register_exception<RecoveryError>(m, "RecoveryError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Tree>(m, "Tree")
      .def(py::init<int, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Tree::size)
      .def_property_readonly("edges", &Tree::edges)
      .def("neighbors", &Tree::neighbors)
      .def("degree", &Tree::degree)
      .def("has_edge", &Tree::has_edge)
      .def("__eq__", [](const Tree& a, const Tree& b) { return a == b; })
      .def("__repr__", [](const Tree& t) { return "Tree(n=" + std::to_string(t.size()) + ")"; });
  m.def("chain_tree", &chain_tree);
  m.def("star_tree", &star_tree, py::arg("n"), py::arg("hub") = 0);

  py::class_<TreeModel>(m, "TreeModel")
      .def_property_readonly("tree", &TreeModel::tree)
      .def_property_readonly("k", &TreeModel::k)
      .def_property_readonly("n", &TreeModel::size)
      .def_property_readonly("root", &TreeModel::root)
      .def_property_readonly("root_marginal", &TreeModel::root_marginal)
      .def("conditional", &TreeModel::conditional)
      .def("to_json", &model_to_json)
      .def_static("from_json", &model_from_json);
  m.def("build_symmetric_model",
        [](const Tree& t, int k, const std::vector<double>& alphas) { return build_symmetric_model(t, k, alphas); },
        py::arg("tree"), py::arg("k"), py::arg("alphas"));
  m.def(
      "build_perturbed_symmetric_model",
      [](const Tree& t, int k, double alpha, double delta, int offset) {
        return build_perturbed_symmetric_model(t, k,
                                               std::vector<PerturbedEdge>(t.edges().size(), {alpha, delta, offset}));
      },
      py::arg("tree"), py::arg("k"), py::arg("alpha"), py::arg("delta"), py::arg("offset") = 1);
  m.def("alpha_for_distance", &alpha_for_distance, py::arg("k"), py::arg("distance"), py::arg("delta") = 0.0,
        py::arg("offset") = 1);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init([](std::vector<double> q, double q_max) { return NoiseSpec{std::move(q), q_max}; }),
           py::arg("q"), py::arg("q_max"))
      .def_readwrite("q", &NoiseSpec::q)
      .def_readwrite("q_max", &NoiseSpec::q_max);

  py::class_<AlgoParams>(m, "AlgoParams")
      .def(py::init<>())
      .def_readwrite("d_min", &AlgoParams::d_min)
      .def_readwrite("d_max", &AlgoParams::d_max)
      .def_readwrite("q_max", &AlgoParams::q_max)
      .def_readwrite("p_min", &AlgoParams::p_min)
      .def_readwrite("t0", &AlgoParams::t0)
      .def_readwrite("root_tol", &AlgoParams::root_tol)
      .def_readwrite("neighborhood_multiplier", &AlgoParams::neighborhood_multiplier)
      .def_readwrite("randomize_init", &AlgoParams::randomize_init)
      .def_readwrite("seed", &AlgoParams::seed);

  py::class_<PairwisePmfSet>(m, "PairwisePmfSet")
      .def_property_readonly("n", &PairwisePmfSet::size)
      .def_property_readonly("k", &PairwisePmfSet::k)
      .def_property_readonly("sample_count", &PairwisePmfSet::sample_count)
      .def("joint", &PairwisePmfSet::joint)
      .def("marginal", &PairwisePmfSet::marginal);
  m.def("exact_pairwise_set", py::overload_cast<const TreeModel&>(&exact_pairwise_set));
  m.def("exact_pairwise_set", py::overload_cast<const TreeModel&, const NoiseSpec&>(&exact_pairwise_set));
  m.def("exact_pairwise_pmf", &exact_pairwise_pmf);

  m.def(
      "sample",
      [](const TreeModel& model, std::uint64_t count, std::uint64_t seed, std::optional<NoiseSpec> noise,
         unsigned threads) {
        SampleMatrix s = sample_clean(model, count, seed, threads);
        if (noise) s = apply_noise(s, *noise, seed, threads);
        return samples_to_array(s);
      },
      py::arg("model"), py::arg("count"), py::arg("seed"), py::arg("noise") = std::nullopt, py::arg("threads") = 1);
  m.def(
      "empirical_pairwise", [](py::array_t<std::uint8_t> a, int k) { return empirical_pairwise(array_to_samples(a, k), k); },
      py::arg("samples"), py::arg("k"));

  m.def("info_distance", &info_distance);
  m.def("distance_matrix", [](const PairwisePmfSet& pmfs) { return distance_table(pmfs).d; });
  m.def("eta_max", &eta_max, py::arg("k"), py::arg("q_max"), py::arg("p_min"));

  py::class_<RootResult>(m, "RootResult")
      .def_readonly("mean_root", &RootResult::mean_root)
      .def_readonly("residual", &RootResult::residual)
      .def_readonly("per_entry_roots", &RootResult::per_entry_roots)
      .def_readonly("feasible", &RootResult::feasible);
  m.def(
      "quadratic_error",
      [](const PairwisePmfSet& pmfs, const Triplet& triplet, int center, double q_max, std::optional<double> t0) {
        return quadratic_error(pmfs, triplet, center, RootPolicy{q_max, t0});
      },
      py::arg("pmfs"), py::arg("triplet"), py::arg("center"), py::arg("q_max") = 1.0, py::arg("t0") = std::nullopt);

  py::class_<ClusterFlags>(m, "ClusterFlags")
      .def_readonly("members", &ClusterFlags::members)
      .def_readonly("candidate_parents", &ClusterFlags::candidate_parents)
      .def_readonly("determined", &ClusterFlags::determined);
  py::class_<RecoveredStructure>(m, "RecoveredStructure")
      .def_readonly("tree", &RecoveredStructure::tree)
      .def_readonly("clusters", &RecoveredStructure::clusters)
      .def("to_json", &structure_to_json);
  m.def("find_tree", &find_tree, py::arg("pmfs"), py::arg("params"));
  m.def("expand_equivalence_class", &expand_equivalence_class, py::arg("structure"), py::arg("pmfs"),
        py::arg("params"));
  m.def("chow_liu", &chow_liu);
  m.def("same_equivalence_class", &same_equivalence_class);
  m.def("ground_truth_flags", &ground_truth_flags, py::arg("model"), py::arg("noise"), py::arg("q_max"),
        py::arg("tol") = 1e-8);

  py::class_<TrialScore>(m, "TrialScore")
      .def_readonly("exact", &TrialScore::exact)
      .def_readonly("eq_class", &TrialScore::eq_class)
      .def_readonly("in_t_sub", &TrialScore::in_t_sub);
  m.def("score_trial", &score_trial);

  m.def("git_describe", &git_describe);
}
