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

#include "dexsieve/axml_parser.hpp"

#include <vector>

namespace dexsieve {

namespace {

using Cursor = ByteCursor<MalformedAxml>;

constexpr std::uint16_t kChunkStringPool = 0x0001;
constexpr std::uint16_t kChunkXml = 0x0003;
constexpr std::uint16_t kChunkStartNamespace = 0x0100;
constexpr std::uint16_t kChunkEndNamespace = 0x0101;
constexpr std::uint16_t kChunkStartElement = 0x0102;
constexpr std::uint16_t kChunkEndElement = 0x0103;
constexpr std::uint16_t kChunkResourceMap = 0x0180;

constexpr std::uint32_t kStringPoolUtf8Flag = 1u << 8;
constexpr std::uint32_t kNoEntry = 0xffffffff;
constexpr std::uint8_t kTypeString = 0x03;

constexpr std::string_view kAndroidNamespace = "http://schemas.android.com/apk/res/android";

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp <= 0x7f) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7ff) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp <= 0xffff) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

class StringPool {
 public:
  void parse(ByteView data, std::size_t chunk_start, std::uint16_t header_size,
             std::uint32_t chunk_size) {
    Cursor cur(data, chunk_start + 8);
    std::uint32_t string_count = cur.u32();
    cur.u32();  // style_count
    std::uint32_t flags = cur.u32();
    std::uint32_t strings_start = cur.u32();
    cur.u32();  // styles_start
    utf8_ = (flags & kStringPoolUtf8Flag) != 0;

    if (strings_start > chunk_size) throw MalformedAxml("string pool stringsStart beyond chunk");
    const std::size_t chunk_end = chunk_start + chunk_size;
    if (chunk_end > data.size()) throw MalformedAxml("string pool chunk overruns file");

    cur.seek(chunk_start + header_size);
    std::vector<std::uint32_t> offsets(string_count);
    for (auto& off : offsets) off = cur.u32();

    strings_.reserve(string_count);
    const std::size_t base = chunk_start + strings_start;
    for (std::uint32_t off : offsets) {
      if (base + off >= chunk_end) throw MalformedAxml("string entry offset beyond pool");
      strings_.push_back(decode_entry(data, base + off, chunk_end));
    }
  }

  const std::string& at(std::uint32_t index) const {
    if (index >= strings_.size()) {
      throw MalformedAxml("string index " + std::to_string(index) + " out of pool bounds (" +
                          std::to_string(strings_.size()) + " entries)");
    }
    return strings_[index];
  }

 private:
  std::string decode_entry(ByteView data, std::size_t at, std::size_t end) const {
    Cursor cur(data, at);
    if (utf8_) {
      // two length prefixes: UTF-16 length then byte length, each one or two
      // bytes with a high-bit extension
      auto read_len8 = [&]() -> std::uint32_t {
        std::uint32_t len = cur.u8();
        if (len & 0x80) len = ((len & 0x7f) << 8) | cur.u8();
        return len;
      };
      read_len8();
      std::uint32_t byte_len = read_len8();
      if (cur.pos() + byte_len > end) throw MalformedAxml("utf-8 string overruns pool");
      ByteView raw = cur.bytes(byte_len);
      return std::string(raw.begin(), raw.end());
    }

    std::uint32_t len = cur.u16();
    if (len & 0x8000) len = ((len & 0x7fff) << 16) | cur.u16();
    if (cur.pos() + static_cast<std::size_t>(len) * 2 > end) {
      throw MalformedAxml("utf-16 string overruns pool");
    }
    std::string out;
    out.reserve(len);
    for (std::uint32_t i = 0; i < len; ++i) {
      std::uint32_t unit = cur.u16();
      if (unit >= 0xd800 && unit <= 0xdbff && i + 1 < len) {
        std::uint32_t low = cur.u16();
        ++i;
        if (low >= 0xdc00 && low <= 0xdfff) {
          append_utf8(out, 0x10000 + ((unit - 0xd800) << 10) + (low - 0xdc00));
          continue;
        }
        append_utf8(out, 0xfffd);
        unit = low;
      }
      if (unit >= 0xd800 && unit <= 0xdfff) {
        append_utf8(out, 0xfffd);  // lone surrogate
      } else {
        append_utf8(out, unit);
      }
    }
    return out;
  }

  std::vector<std::string> strings_;
  bool utf8_ = false;
};

}  // namespace

bool looks_like_axml(ByteView data) {
  if (data.size() < 8) return false;
  std::uint16_t type = static_cast<std::uint16_t>(data[0] | (data[1] << 8));
  std::uint16_t header = static_cast<std::uint16_t>(data[2] | (data[3] << 8));
  return type == kChunkXml && header == 0x0008;
}

PermissionSet parse_axml(ByteView bytes) {
  Cursor root(bytes, 0);
  std::uint16_t root_type = root.u16();
  std::uint16_t root_header = root.u16();
  std::uint32_t root_size = root.u32();
  if (root_type != kChunkXml) throw MalformedAxml("not a binary XML document (bad root chunk)");
  if (root_header < 8 || root_size < root_header || root_size > bytes.size()) {
    throw MalformedAxml("bad root chunk sizes");
  }

  StringPool pool;
  bool have_pool = false;
  PermissionSet perms;

  std::size_t off = root_header;
  while (off < root_size) {
    Cursor cur(bytes, off);
    std::uint16_t type = cur.u16();
    std::uint16_t header_size = cur.u16();
    std::uint32_t size = cur.u32();
    if (header_size < 8 || size < header_size || off + size > root_size) {
      throw MalformedAxml("truncated chunk at offset " + std::to_string(off));
    }

    switch (type) {
      case kChunkStringPool:
        if (!have_pool) {
          pool.parse(bytes, off, header_size, size);
          have_pool = true;
        }
        break;
      case kChunkStartElement: {
        cur.seek(off + header_size);
        std::uint32_t elem_ns = cur.u32();
        std::uint32_t elem_name = cur.u32();
        std::uint16_t attribute_start = cur.u16();
        std::uint16_t attribute_size = cur.u16();
        std::uint16_t attribute_count = cur.u16();
        (void)elem_ns;
        if (!have_pool) throw MalformedAxml("element chunk before string pool");

        const std::string& name = pool.at(elem_name);
        if (name != "uses-permission" && name != "uses-permission-sdk-23") break;

        std::size_t attrs_at = off + header_size + attribute_start;
        if (attribute_size < 20 ||
            attrs_at + static_cast<std::size_t>(attribute_count) * attribute_size > off + size) {
          throw MalformedAxml("attribute array overruns element chunk at offset " +
                              std::to_string(off));
        }
        for (std::uint16_t i = 0; i < attribute_count; ++i) {
          Cursor attr(bytes, attrs_at + static_cast<std::size_t>(i) * attribute_size);
          std::uint32_t attr_ns = attr.u32();
          std::uint32_t attr_name = attr.u32();
          std::uint32_t raw_value = attr.u32();
          attr.u16();  // typed value size
          attr.u8();   // res0
          std::uint8_t data_type = attr.u8();
          std::uint32_t data = attr.u32();

          if (pool.at(attr_name) != "name") continue;
          if (attr_ns != kNoEntry && pool.at(attr_ns) != kAndroidNamespace) continue;

          if (raw_value != kNoEntry) {
            perms.add(pool.at(raw_value));
          } else if (data_type == kTypeString) {
            perms.add(pool.at(data));
          }
        }
        break;
      }
      case kChunkEndElement:
      case kChunkStartNamespace:
      case kChunkEndNamespace:
      case kChunkResourceMap:
      default:
        break;  // skipped by size
    }
    off += size;
  }
  return perms;
}

}  // namespace dexsieve
