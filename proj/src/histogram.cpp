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

#include "dexsieve/histogram.hpp"

#include <charconv>

#include "dexsieve/common.hpp"
#include "dexsieve/io_util.hpp"
#include "dexsieve/kernels.hpp"

namespace dexsieve {

OpcodeHistogram merge_histograms(std::span<const OpcodeHistogram> parts) {
  OpcodeHistogram out;
  for (const auto& part : parts) {
    kernels::add_u64(out.counts.data(), part.counts.data(), kOpcodeCount);
    out.total += part.total;
  }
  return out;
}

std::string histogram_record(const std::string& app_id, const OpcodeHistogram& h) {
  std::string line;
  line.reserve(app_id.size() + kOpcodeCount * 3 + 24);
  line += app_id;
  char buf[24];
  for (int i = 0; i < kOpcodeCount; ++i) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), h.counts[i]);
    line += ',';
    line.append(buf, end);
  }
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), h.total);
  line += ',';
  line.append(buf, end);
  return line;
}

std::pair<std::string, OpcodeHistogram> parse_histogram_record(const std::string& line) {
  auto fields = split(line, ',');
  if (fields.size() != static_cast<std::size_t>(kOpcodeCount) + 2) {
    throw IoError("histogram record must have app_id plus 257 numeric fields, got " +
                  std::to_string(fields.size()));
  }
  OpcodeHistogram h;
  std::uint64_t sum = 0;
  for (int i = 0; i < kOpcodeCount; ++i) {
    const std::string& f = fields[static_cast<std::size_t>(i) + 1];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), h.counts[i]);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw IoError("bad histogram count field: '" + f + "'");
    }
    sum += h.counts[i];
  }
  const std::string& totalf = fields.back();
  auto [ptr, ec] = std::from_chars(totalf.data(), totalf.data() + totalf.size(), h.total);
  if (ec != std::errc() || ptr != totalf.data() + totalf.size()) {
    throw IoError("bad histogram total field: '" + totalf + "'");
  }
  if (h.total != sum) throw IoError("histogram total does not match bucket sum in record");
  return {fields[0], h};
}

}  // namespace dexsieve
