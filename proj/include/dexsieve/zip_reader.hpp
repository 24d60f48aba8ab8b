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

#include <string>
#include <vector>

#include "dexsieve/common.hpp"

namespace dexsieve {

// Read-only ZIP access, enough for APK containers: central directory walk,
// stored and deflated entries. No zip64, no encryption.
class ZipReader {
 public:
  struct Entry {
    std::string name;
    std::uint16_t method;  // 0 = stored, 8 = deflate
    std::uint32_t compressed_size;
    std::uint32_t uncompressed_size;
    std::uint32_t local_header_offset;
  };

  explicit ZipReader(ByteView data);

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* find(std::string_view name) const;
  Bytes read(const Entry& entry) const;

 private:
  ByteView data_;
  std::vector<Entry> entries_;
};

bool looks_like_zip(ByteView data);

}  // namespace dexsieve
