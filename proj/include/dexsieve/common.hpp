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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dexsieve {

inline constexpr const char* kToolName = "dexsieve";
inline constexpr const char* kToolVersion = "1.0.0";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input rejected hard enough that the file must be quarantined.
class MalformedDex : public Error {
 public:
  using Error::Error;
};

class MalformedAxml : public Error {
 public:
  using Error::Error;
};

class MalformedXml : public Error {
 public:
  using Error::Error;
};

class MalformedZip : public Error {
 public:
  using Error::Error;
};

class UnknownMnemonic : public Error {
 public:
  using Error::Error;
};

class DuplicateAppId : public Error {
 public:
  using Error::Error;
};

class EmptyClass : public Error {
 public:
  using Error::Error;
};

class NOutOfRange : public Error {
 public:
  using Error::Error;
};

class SingleClassData : public Error {
 public:
  using Error::Error;
};

class InconsistentDimensions : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptModel : public Error {
 public:
  using Error::Error;
};

class TooSmallForSplit : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Bounds-checked little-endian cursor over a byte buffer. Every parser in
// this project reads through one of these; an out-of-bounds access throws
// the parser's own Malformed* error with the current offset in the message.
template <class ErrorT>
class ByteCursor {
 public:
  explicit ByteCursor(ByteView data, std::size_t pos = 0) : data_(data), pos_(pos) {
    if (pos_ > data_.size()) fail("cursor start beyond end of input");
  }

  std::size_t pos() const { return pos_; }
  std::size_t size() const { return data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

  void seek(std::size_t off) {
    if (off > data_.size()) fail("seek beyond end of input");
    pos_ = off;
  }

  void skip(std::size_t n) {
    if (n > remaining()) fail("skip beyond end of input");
    pos_ += n;
  }

  std::uint8_t u8() {
    if (remaining() < 1) fail("truncated u8");
    return data_[pos_++];
  }

  std::uint16_t u16() {
    if (remaining() < 2) fail("truncated u16");
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    if (remaining() < 4) fail("truncated u32");
    std::uint32_t v = static_cast<std::uint32_t>(data_[pos_]) |
                      (static_cast<std::uint32_t>(data_[pos_ + 1]) << 8) |
                      (static_cast<std::uint32_t>(data_[pos_ + 2]) << 16) |
                      (static_cast<std::uint32_t>(data_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t lo = u32();
    std::uint64_t hi = u32();
    return lo | (hi << 32);
  }

  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  ByteView bytes(std::size_t n) {
    if (n > remaining()) fail("truncated byte run");
    ByteView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

  // Unsigned LEB128, at most five bytes as in the DEX format.
  std::uint32_t uleb128() {
    std::uint32_t result = 0;
    for (int shift = 0; shift < 35; shift += 7) {
      std::uint8_t b = u8();
      result |= static_cast<std::uint32_t>(b & 0x7f) << shift;
      if ((b & 0x80) == 0) return result;
    }
    fail("uleb128 longer than five bytes");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ErrorT(why + " (offset " + std::to_string(pos_) + ")");
  }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace dexsieve
