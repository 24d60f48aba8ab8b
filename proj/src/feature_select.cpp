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

#include "dexsieve/feature_select.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "dexsieve/common.hpp"
#include "dexsieve/io_util.hpp"
#include "dexsieve/kernels.hpp"

namespace dexsieve {

namespace {

void accumulate_class(std::span<const OpcodeHistogram> apps, FrequencyMode mode,
                      std::array<double, kOpcodeCount>& mean_out) {
  if (mode == FrequencyMode::kRawCount) {
    std::array<std::uint64_t, kOpcodeCount> sums{};
    for (const OpcodeHistogram& h : apps) {
      kernels::add_u64(sums.data(), h.counts.data(), kOpcodeCount);
    }
    const double n = static_cast<double>(apps.size());
    for (int j = 0; j < kOpcodeCount; ++j) {
      mean_out[j] = static_cast<double>(sums[j]) / n;
    }
    return;
  }

  std::array<double, kOpcodeCount> acc{};
  std::array<double, kOpcodeCount> scratch;
  for (const OpcodeHistogram& h : apps) {
    if (h.total == 0) continue;  // empty app: zero contribution
    for (int j = 0; j < kOpcodeCount; ++j) scratch[j] = static_cast<double>(h.counts[j]);
    kernels::axpy_f64(acc.data(), scratch.data(), 1.0 / static_cast<double>(h.total), kOpcodeCount);
  }
  const double n = static_cast<double>(apps.size());
  for (int j = 0; j < kOpcodeCount; ++j) mean_out[j] = acc[j] / n;
}

}  // namespace

ClassMeanProfile compute_profile(std::span<const OpcodeHistogram> benign,
                                 std::span<const OpcodeHistogram> malicious, FrequencyMode mode) {
  if (benign.empty()) throw EmptyClass("no benign apps in class profile");
  if (malicious.empty()) throw EmptyClass("no malicious apps in class profile");

  ClassMeanProfile profile;
  profile.n_benign = benign.size();
  profile.n_malicious = malicious.size();
  accumulate_class(benign, mode, profile.f_benign);
  accumulate_class(malicious, mode, profile.f_malicious);
  return profile;
}

FeatureRanking rank_features(const ClassMeanProfile& profile) {
  FeatureRanking ranking;
  kernels::abs_diff_f64(ranking.scores.data(), profile.f_benign.data(), profile.f_malicious.data(),
                        kOpcodeCount);

  std::array<int, kOpcodeCount> idx;
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (ranking.scores[a] != ranking.scores[b]) return ranking.scores[a] > ranking.scores[b];
    return a < b;
  });
  for (int k = 0; k < kOpcodeCount; ++k) ranking.order[k] = static_cast<std::uint8_t>(idx[k]);
  return ranking;
}

std::vector<std::uint8_t> top_n(const FeatureRanking& ranking, int n) {
  if (n < 1 || n > kOpcodeCount) {
    throw NOutOfRange("feature count " + std::to_string(n) + " outside 1..256");
  }
  return std::vector<std::uint8_t>(ranking.order.begin(), ranking.order.begin() + n);
}

std::string difference_report(const FeatureRanking& ranking, int k) {
  if (k < 1 || k > kOpcodeCount) {
    throw NOutOfRange("report row count " + std::to_string(k) + " outside 1..256");
  }
  std::string out =
      "# dexsieve opcode difference report v1\n"
      "# columns: mnemonic <TAB> score\n";
  for (int i = 0; i < k; ++i) {
    std::uint8_t op = ranking.order[i];
    out += opcode_display_name(op);
    out += '\t';
    out += format_double(ranking.scores[op], 6);
    out += '\n';
  }
  return out;
}

std::string serialize_feature_list(std::string_view group, const FeatureRanking& ranking, int n) {
  if (n < 1 || n > kOpcodeCount) {
    throw NOutOfRange("feature count " + std::to_string(n) + " outside 1..256");
  }
  std::string out = "dexsieve-features v1\n";
  out += "group\t";
  out += group;
  out += '\n';
  out += "n\t" + std::to_string(n) + '\n';
  out += "# columns: opcode_hex <TAB> mnemonic <TAB> score\n";
  char hex[8];
  for (int i = 0; i < n; ++i) {
    std::uint8_t op = ranking.order[i];
    std::snprintf(hex, sizeof(hex), "0x%02x", op);
    out += hex;
    out += '\t';
    out += opcode_display_name(op);
    out += '\t';
    out += format_double(ranking.scores[op], 9);
    out += '\n';
  }
  return out;
}

FeatureListFile parse_feature_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "dexsieve-features v1") {
    throw IoError("not a dexsieve feature list (bad version line)");
  }
  FeatureListFile file;
  int declared_n = -1;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split(t, '\t');
    if (fields[0] == "group" && fields.size() == 2) {
      file.group = fields[1];
      continue;
    }
    if (fields[0] == "n" && fields.size() == 2) {
      declared_n = std::stoi(fields[1]);
      continue;
    }
    if (fields.size() != 3) throw IoError("bad feature list row: '" + t + "'");
    unsigned op = 0;
    auto [ptr, ec] = std::from_chars(fields[0].data() + 2, fields[0].data() + fields[0].size(), op, 16);
    if (fields[0].size() < 3 || fields[0].compare(0, 2, "0x") != 0 || ec != std::errc() ||
        ptr != fields[0].data() + fields[0].size() || op > 0xff) {
      throw IoError("bad opcode field in feature list: '" + fields[0] + "'");
    }
    file.opcodes.push_back(static_cast<std::uint8_t>(op));
    file.scores.push_back(std::stod(fields[2]));
  }
  if (declared_n < 0 || static_cast<std::size_t>(declared_n) != file.opcodes.size()) {
    throw IoError("feature list row count does not match declared n");
  }
  return file;
}

}  // namespace dexsieve
