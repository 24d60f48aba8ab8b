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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dexsieve/common.hpp"
#include "dexsieve/histogram.hpp"

namespace dexsieve::testutil {

inline void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Hand-assembled minimal DEX independent of the library's builder: fixed
// layout with one class whose single static method holds the given code
// units. Checksum and signature are left zero (verification is off by
// default). Layout:
//   0x00 header (0x70 bytes)
//   0x70 class_def_item (32 bytes), class_data_off = 0x90
//   0x90 class_data (8 bytes), code_off = 0x98 (uleb 0x98 0x01)
//   0x98 code_item header (16 bytes) + insns
inline Bytes hand_dex(const std::vector<std::uint16_t>& insns) {
  const std::uint32_t file_size = 0x98 + 16 + 2 * static_cast<std::uint32_t>(insns.size());
  Bytes d;
  d.reserve(file_size);
  // magic "dex\n035\0"
  d.insert(d.end(), {0x64, 0x65, 0x78, 0x0a, 0x30, 0x33, 0x35, 0x00});
  put_u32(d, 0);                                   // checksum (unverified)
  for (int i = 0; i < 20; ++i) d.push_back(0x00);  // signature (unverified)
  put_u32(d, file_size);
  put_u32(d, 0x70);        // header_size
  put_u32(d, 0x12345678);  // endian_tag
  put_u32(d, 0);           // link_size
  put_u32(d, 0);           // link_off
  put_u32(d, 0);           // map_off
  for (int i = 0; i < 10; ++i) put_u32(d, 0);  // string/type/proto/field/method tables
  put_u32(d, 1);                               // class_defs_size
  put_u32(d, 0x70);                            // class_defs_off
  put_u32(d, file_size - 0x90);                // data_size
  put_u32(d, 0x90);                            // data_off

  // class_def_item
  put_u32(d, 0);           // class_idx
  put_u32(d, 0x0001);      // access_flags
  put_u32(d, 0xffffffff);  // superclass NO_INDEX
  put_u32(d, 0);           // interfaces_off
  put_u32(d, 0xffffffff);  // source_file NO_INDEX
  put_u32(d, 0);           // annotations_off
  put_u32(d, 0x90);        // class_data_off
  put_u32(d, 0);           // static_values_off

  // class_data: 0 static fields, 0 instance fields, 1 direct, 0 virtual;
  // method_idx_diff 0, access ACC_STATIC, code_off uleb(0x98) = 0x98 0x01
  d.insert(d.end(), {0x00, 0x00, 0x01, 0x00, 0x00, 0x08, 0x98, 0x01});

  // code_item at 0x98
  put_u16(d, 1);  // registers_size
  put_u16(d, 0);  // ins_size
  put_u16(d, 0);  // outs_size
  put_u16(d, 0);  // tries_size
  put_u32(d, 0);  // debug_info_off
  put_u32(d, static_cast<std::uint32_t>(insns.size()));
  for (std::uint16_t u : insns) put_u16(d, u);
  return d;
}

// Reference AXML writer (test oracle side): manifest element followed by one
// uses-permission element per permission, android:name string-typed.
class AxmlWriter {
 public:
  explicit AxmlWriter(bool utf8_pool) : utf8_(utf8_pool) {}

  Bytes manifest_with_permissions(const std::vector<std::string>& perms) {
    // string pool order: [android ns uri, "name", "manifest",
    // "uses-permission", perms...]
    std::vector<std::string> strings = {
        "http://schemas.android.com/apk/res/android", "name", "manifest", "uses-permission"};
    for (const std::string& p : perms) strings.push_back(p);

    Bytes pool = string_pool(strings);

    Bytes body;
    append_start_element(body, /*name=*/2, /*attr_count=*/0, {});
    for (std::size_t i = 0; i < perms.size(); ++i) {
      // attribute: ns=0 (android uri), name=1 ("name"), value string 4+i
      append_start_element(body, /*name=*/3, /*attr_count=*/1,
                           {static_cast<std::uint32_t>(4 + i)});
      append_end_element(body, 3);
    }
    append_end_element(body, 2);

    Bytes out;
    put_u16(out, 0x0003);  // RES_XML_TYPE
    put_u16(out, 0x0008);
    put_u32(out, static_cast<std::uint32_t>(8 + pool.size() + body.size()));
    out.insert(out.end(), pool.begin(), pool.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
  }

 private:
  Bytes string_pool(const std::vector<std::string>& strings) {
    Bytes data;
    std::vector<std::uint32_t> offsets;
    for (const std::string& s : strings) {
      offsets.push_back(static_cast<std::uint32_t>(data.size()));
      if (utf8_) {
        data.push_back(static_cast<std::uint8_t>(s.size()));  // utf-16 length (ascii here)
        data.push_back(static_cast<std::uint8_t>(s.size()));  // byte length
        data.insert(data.end(), s.begin(), s.end());
        data.push_back(0x00);
      } else {
        put_u16(data, static_cast<std::uint16_t>(s.size()));
        for (char c : s) put_u16(data, static_cast<std::uint16_t>(c));
        put_u16(data, 0x0000);
      }
    }
    while (data.size() % 4 != 0) data.push_back(0x00);

    const std::uint32_t header = 28;
    const std::uint32_t strings_start = header + 4 * static_cast<std::uint32_t>(strings.size());
    Bytes out;
    put_u16(out, 0x0001);  // RES_STRING_POOL_TYPE
    put_u16(out, static_cast<std::uint16_t>(header));
    put_u32(out, strings_start + static_cast<std::uint32_t>(data.size()));
    put_u32(out, static_cast<std::uint32_t>(strings.size()));
    put_u32(out, 0);                        // style count
    put_u32(out, utf8_ ? (1u << 8) : 0u);   // flags
    put_u32(out, strings_start);
    put_u32(out, 0);  // styles start
    for (std::uint32_t off : offsets) put_u32(out, off);
    out.insert(out.end(), data.begin(), data.end());
    return out;
  }

  void append_start_element(Bytes& out, std::uint32_t name_idx, std::uint16_t attr_count,
                            const std::vector<std::uint32_t>& value_indices) {
    put_u16(out, 0x0102);  // START_ELEMENT
    put_u16(out, 0x0010);
    put_u32(out, 16 + 20 + 20u * attr_count);
    put_u32(out, 1);           // line
    put_u32(out, 0xffffffff);  // comment
    put_u32(out, 0xffffffff);  // element ns
    put_u32(out, name_idx);
    put_u16(out, 20);  // attributeStart
    put_u16(out, 20);  // attributeSize
    put_u16(out, attr_count);
    put_u16(out, 0);  // idIndex
    put_u16(out, 0);  // classIndex
    put_u16(out, 0);  // styleIndex
    for (std::uint32_t value_idx : value_indices) {
      put_u32(out, 0);           // attr ns = android uri (pool index 0)
      put_u32(out, 1);           // attr name = "name"
      put_u32(out, value_idx);   // rawValue
      put_u16(out, 8);           // typedValue size
      out.push_back(0);          // res0
      out.push_back(0x03);       // TYPE_STRING
      put_u32(out, value_idx);
    }
  }

  void append_end_element(Bytes& out, std::uint32_t name_idx) {
    put_u16(out, 0x0103);  // END_ELEMENT
    put_u16(out, 0x0010);
    put_u32(out, 24);
    put_u32(out, 1);
    put_u32(out, 0xffffffff);
    put_u32(out, 0xffffffff);
    put_u32(out, name_idx);
  }

  bool utf8_;
};

// Deterministic scratch directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dexsieve_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline OpcodeHistogram random_histogram(std::mt19937_64& rng, std::uint64_t max_count = 50) {
  OpcodeHistogram h;
  for (int j = 0; j < kOpcodeCount; ++j) {
    std::uint64_t c = rng() % (max_count + 1);
    h.counts[j] = c;
    h.total += c;
  }
  return h;
}

// Minimal ZIP writer for APK-shaped fixtures: stored entries only.
inline Bytes build_zip(const std::vector<std::pair<std::string, Bytes>>& entries) {
  Bytes out;
  std::vector<std::uint32_t> offsets;
  for (const auto& [name, data] : entries) {
    offsets.push_back(static_cast<std::uint32_t>(out.size()));
    put_u32(out, 0x04034b50);  // local header
    put_u16(out, 20);          // version needed
    put_u16(out, 0);           // flags
    put_u16(out, 0);           // method: stored
    put_u16(out, 0);           // time
    put_u16(out, 0);           // date
    put_u32(out, 0);           // crc (unchecked by the reader)
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    put_u16(out, static_cast<std::uint16_t>(name.size()));
    put_u16(out, 0);  // extra
    out.insert(out.end(), name.begin(), name.end());
    out.insert(out.end(), data.begin(), data.end());
  }
  const std::uint32_t cd_offset = static_cast<std::uint32_t>(out.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [name, data] = entries[i];
    put_u32(out, 0x02014b50);  // central directory header
    put_u16(out, 20);
    put_u16(out, 20);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u32(out, 0);
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    put_u16(out, static_cast<std::uint16_t>(name.size()));
    put_u16(out, 0);  // extra
    put_u16(out, 0);  // comment
    put_u16(out, 0);  // disk
    put_u16(out, 0);  // internal attrs
    put_u32(out, 0);  // external attrs
    put_u32(out, offsets[i]);
    out.insert(out.end(), name.begin(), name.end());
  }
  const std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;
  put_u32(out, 0x06054b50);  // EOCD
  put_u16(out, 0);
  put_u16(out, 0);
  put_u16(out, static_cast<std::uint16_t>(entries.size()));
  put_u16(out, static_cast<std::uint16_t>(entries.size()));
  put_u32(out, cd_size);
  put_u32(out, cd_offset);
  put_u16(out, 0);  // comment length
  return out;
}

}  // namespace dexsieve::testutil
