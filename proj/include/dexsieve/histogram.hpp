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
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "dexsieve/opcode_table.hpp"

namespace dexsieve {

// Per-app opcode occurrence counts, one bucket per opcode value 0x00-0xFF.
// total always equals the sum of the buckets.
struct OpcodeHistogram {
  std::array<std::uint64_t, kOpcodeCount> counts{};
  std::uint64_t total = 0;

  void bump(std::uint8_t op) {
    ++counts[op];
    ++total;
  }

  bool operator==(const OpcodeHistogram&) const = default;
};

// Bucketwise sum; the empty merge is the all-zero histogram.
OpcodeHistogram merge_histograms(std::span<const OpcodeHistogram> parts);

// One line per app: app_id,count[0x00],...,count[0xff],total
std::string histogram_record(const std::string& app_id, const OpcodeHistogram& h);
std::pair<std::string, OpcodeHistogram> parse_histogram_record(const std::string& line);

inline constexpr const char* kHistogramFileHeader =
    "# dexsieve histograms v1\n"
    "# columns: app_id,count[0x00]..count[0xff],total\n";

}  // namespace dexsieve
