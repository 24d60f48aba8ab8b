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
#include <span>
#include <string>
#include <vector>

#include "dexsieve/histogram.hpp"

namespace dexsieve {

// How an app's per-opcode frequency f_i enters the class means. Raw counts
// are the default; relative frequency (count over app total) is available
// because raw counts are sensitive to app size.
enum class FrequencyMode : std::uint8_t {
  kRawCount,
  kRelative,
};

// Per-class mean opcode frequency over the benign and malicious apps of one
// group. All sums run in opcode-ascending bucket order with apps accumulated
// in input order, so identical inputs reproduce to the last bit.
struct ClassMeanProfile {
  std::array<double, kOpcodeCount> f_benign{};
  std::array<double, kOpcodeCount> f_malicious{};
  std::size_t n_benign = 0;
  std::size_t n_malicious = 0;

  bool operator==(const ClassMeanProfile&) const = default;
};

// Throws EmptyClass when either side has no apps. In relative mode an app
// with an all-zero histogram contributes a zero vector.
ClassMeanProfile compute_profile(std::span<const OpcodeHistogram> benign,
                                 std::span<const OpcodeHistogram> malicious,
                                 FrequencyMode mode = FrequencyMode::kRawCount);

// Opcodes ordered by descending class-mean difference. scores[j] is the
// absolute benign/malicious mean gap of opcode j; order is the permutation
// of 0..255 sorted by descending score, ties broken by ascending opcode.
struct FeatureRanking {
  std::array<double, kOpcodeCount> scores{};
  std::array<std::uint8_t, kOpcodeCount> order{};

  bool operator==(const FeatureRanking&) const = default;
};

FeatureRanking rank_features(const ClassMeanProfile& profile);

// First n opcodes of the ranking. Throws NOutOfRange unless 1 <= n <= 256.
std::vector<std::uint8_t> top_n(const FeatureRanking& ranking, int n);

// Plot-ready two-column report (mnemonic, score) of the top k opcodes.
// Throws NOutOfRange unless 1 <= k <= 256.
std::string difference_report(const FeatureRanking& ranking, int k);

// Versioned text artifact carrying a group's selected features.
std::string serialize_feature_list(std::string_view group, const FeatureRanking& ranking, int n);

struct FeatureListFile {
  std::string group;
  std::vector<std::uint8_t> opcodes;  // ranking order
  std::vector<double> scores;
};

FeatureListFile parse_feature_list(const std::string& text);

}  // namespace dexsieve
