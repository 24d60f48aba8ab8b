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
#include <string>

#include "dexsieve/common.hpp"

namespace dexsieve {

// Streaming SHA-256; keys the content-addressed extraction cache.
class Sha256 {
 public:
  Sha256();
  void update(ByteView data);
  void update(const std::string& s);
  std::array<std::uint8_t, 32> finish();

  static std::string hex(ByteView data);

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint64_t length_ = 0;
  std::uint8_t buffer_[64];
  std::size_t buffered_ = 0;
};

// SHA-1 digest of a whole buffer; the DEX header's signature field.
std::array<std::uint8_t, 20> sha1(ByteView data);

// Adler-32 as used by the DEX header checksum (zlib-backed).
std::uint32_t adler32_checksum(ByteView data);

std::string to_hex(ByteView data);

}  // namespace dexsieve
