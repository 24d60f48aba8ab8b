/*
 * Copyright (C) 2026 The dexsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "dexsieve/corpus.hpp"
#include "dexsieve/histogram.hpp"
#include "dexsieve/permissions.hpp"

namespace dexsieve {

// Synthetic corpus generation: desk-scale stand-in for real app corpora.
// Each group draws benign and malicious apps from per-class opcode count
// distributions (bucketwise normal around a mean vector, stddev =
// dispersion x mean, rounded and clipped at zero) and requests the group's
// template permissions, so declared group membership matches assignment
// exactly. Everything derives from the seed.

struct SyntheticGroupSpec {
  GroupId group = GroupId::kOthers;
  int benign_count = 0;
  int malicious_count = 0;
  std::vector<std::string> permissions;  // manifest template
  std::array<double, kOpcodeCount> benign_mean{};
  std::array<double, kOpcodeCount> malicious_mean{};

  // Opcodes whose class means differ: the ground truth a feature selector
  // should recover.
  std::vector<std::uint8_t> planted_opcodes() const;
};

struct SyntheticSpec {
  std::uint64_t seed = 7;
  double dispersion = 0.15;
  bool emit_dex = false;  // smali bundles by default
  std::vector<SyntheticGroupSpec> groups;
};

// The benchmark corpus: all eight dangerous groups plus Others, a planted
// ten-opcode gap per group, integral means.
SyntheticSpec default_benchmark_spec(int benign_per_group = 85, int malicious_per_group = 80,
                                     std::uint64_t seed = 7);

SyntheticSpec parse_synthetic_spec_json(const std::string& json_text);  // throws InvalidSpec
std::string serialize_synthetic_spec(const SyntheticSpec& spec);

struct GeneratedApp {
  std::string app_id;
  Label label = Label::kBenign;
  GroupId group = GroupId::kOthers;
  OpcodeHistogram histogram;  // histogram of the materialized app
};

struct GenerationResult {
  CorpusManifest manifest;  // also written to <out_dir>/manifest.tsv
  std::vector<GeneratedApp> apps;
};

GenerationResult generate_synthetic(const SyntheticSpec& spec,
                                    const std::filesystem::path& out_dir);

// Smali class whose instruction lines realize exactly the given counts
// (opcode-ascending emission); switch/fill-array payload blocks included.
std::string render_smali_for_counts(const std::array<std::uint64_t, kOpcodeCount>& counts,
                                    std::string_view class_name);

std::string render_manifest_xml(const PermissionSet& perms, std::string_view package);

}  // namespace dexsieve
