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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "noisytree/model.hpp"
#include "noisytree/oracle.hpp"
#include "noisytree/recovery.hpp"
#include "noisytree/sampler.hpp"

namespace noisytree {

// All writers use 17 significant digits so doubles round-trip exactly.
std::string model_to_json(const TreeModel& model);
TreeModel model_from_json(const std::string& text);

std::string noise_to_json(const NoiseSpec& noise);
NoiseSpec noise_from_json(const std::string& text);

std::string pmfs_to_json(const PairwisePmfSet& pmfs);
PairwisePmfSet pmfs_from_json(const std::string& text);

// Little-endian: "NTPMF001", u32 n, u32 k, u32 source, u64 sample count, then
// per stored pair u32 i, u32 j and k*k float64 in row-major order.
void write_pmfs_binary(std::ostream& out, const PairwisePmfSet& pmfs);
PairwisePmfSet read_pmfs_binary(std::istream& in);

// Little-endian header u64 N, u32 n, u32 k, then N*n uint8 symbols row by row.
void write_samples_binary(std::ostream& out, const SampleMatrix& samples);
SampleMatrix read_samples_binary(std::istream& in);
void write_samples_csv(std::ostream& out, const SampleMatrix& samples);

std::string structure_to_json(const RecoveredStructure& structure);
RecoveredStructure structure_from_json(const std::string& text);
// One "a b" line per edge, sorted.
std::string edge_list_text(const Tree& tree);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace noisytree
