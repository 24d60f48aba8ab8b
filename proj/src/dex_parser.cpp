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

#include "dexsieve/dex_parser.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "dexsieve/digest.hpp"
#include "dexsieve/opcode_table.hpp"

namespace dexsieve {

namespace {

using Cursor = ByteCursor<MalformedDex>;

constexpr std::size_t kHeaderSize = 0x70;
constexpr std::uint32_t kEndianConstant = 0x12345678;
constexpr std::uint32_t kReverseEndianConstant = 0x78563412;

struct DexHeader {
  std::uint32_t checksum;
  std::uint8_t signature[20];
  std::uint32_t file_size;
  std::uint32_t header_size;
  std::uint32_t class_defs_size;
  std::uint32_t class_defs_off;
};

DexHeader parse_header(ByteView dex) {
  if (dex.size() < kHeaderSize) {
    throw MalformedDex("file shorter than DEX header (" + std::to_string(dex.size()) + " bytes)");
  }
  // magic: "dex\n" VVV "\0", versions 035-039 accepted
  static const std::uint8_t kMagicPrefix[4] = {0x64, 0x65, 0x78, 0x0a};
  if (std::memcmp(dex.data(), kMagicPrefix, 4) != 0 || dex[7] != 0x00) {
    throw MalformedDex("bad DEX magic");
  }
  if (dex[4] != '0' || dex[5] != '3' || dex[6] < '5' || dex[6] > '9') {
    throw MalformedDex("unsupported DEX version in magic");
  }

  Cursor cur(dex, 8);
  DexHeader h{};
  h.checksum = cur.u32();
  std::memcpy(h.signature, cur.bytes(20).data(), 20);
  h.file_size = cur.u32();
  h.header_size = cur.u32();
  std::uint32_t endian_tag = cur.u32();
  if (endian_tag == kReverseEndianConstant) {
    throw MalformedDex("big-endian DEX files are not supported");
  }
  if (endian_tag != kEndianConstant) {
    throw MalformedDex("bad endian tag");
  }
  if (h.header_size < kHeaderSize || h.header_size > dex.size()) {
    throw MalformedDex("implausible header_size " + std::to_string(h.header_size));
  }
  if (h.file_size > dex.size()) {
    throw MalformedDex("header file_size exceeds actual size");
  }
  cur.skip(8);   // link_size, link_off
  cur.skip(4);   // map_off
  cur.skip(40);  // string/type/proto/field/method id tables
  h.class_defs_size = cur.u32();
  h.class_defs_off = cur.u32();
  return h;
}

void verify_digests(ByteView dex, const DexHeader& h) {
  // Adler-32 covers everything after magic+checksum; SHA-1 everything after
  // the signature field.
  std::uint32_t adler = adler32_checksum(dex.subspan(12));
  if (adler != h.checksum) {
    throw MalformedDex("checksum mismatch: header says " + std::to_string(h.checksum) +
                       ", computed " + std::to_string(adler));
  }
  auto digest = sha1(dex.subspan(32));
  if (std::memcmp(digest.data(), h.signature, 20) != 0) {
    throw MalformedDex("signature mismatch");
  }
}

// Code units a payload pseudo-instruction occupies, including its ident.
std::size_t payload_units(const std::vector<std::uint16_t>& insns, std::size_t pos,
                          std::uint16_t ident) {
  auto need = [&](std::size_t n) {
    if (pos + n > insns.size()) {
      throw MalformedDex("switch/array payload header overruns insns (unit " +
                         std::to_string(pos) + ")");
    }
  };
  switch (ident) {
    case kPackedSwitchPayloadIdent: {
      need(2);
      std::size_t entries = insns[pos + 1];
      return entries * 2 + 4;
    }
    case kSparseSwitchPayloadIdent: {
      need(2);
      std::size_t entries = insns[pos + 1];
      return entries * 4 + 2;
    }
    case kFillArrayPayloadIdent: {
      need(4);
      std::uint64_t element_width = insns[pos + 1];
      std::uint64_t element_count =
          static_cast<std::uint64_t>(insns[pos + 2]) | (static_cast<std::uint64_t>(insns[pos + 3]) << 16);
      std::uint64_t data_bytes = element_width * element_count;
      return static_cast<std::size_t>((data_bytes + 1) / 2 + 4);
    }
    default:
      throw MalformedDex("unreachable payload ident");
  }
}

void walk_code_item(ByteView dex, std::uint32_t code_off, OpcodeHistogram& hist) {
  Cursor cur(dex, 0);
  if (code_off > dex.size()) throw MalformedDex("code_item offset out of bounds");
  cur.seek(code_off);
  cur.skip(8);  // registers_size, ins_size, outs_size, tries_size
  cur.skip(4);  // debug_info_off
  std::uint32_t insns_size = cur.u32();
  if (cur.remaining() / 2 < insns_size) {
    throw MalformedDex("insns array overruns file at code_item " + std::to_string(code_off));
  }

  std::vector<std::uint16_t> insns(insns_size);
  for (std::uint32_t i = 0; i < insns_size; ++i) insns[i] = cur.u16();

  std::size_t pos = 0;
  while (pos < insns.size()) {
    std::uint16_t unit = insns[pos];
    std::uint8_t op = static_cast<std::uint8_t>(unit & 0xff);

    if (op == kOpNop && (unit == kPackedSwitchPayloadIdent || unit == kSparseSwitchPayloadIdent ||
                         unit == kFillArrayPayloadIdent)) {
      std::size_t units = payload_units(insns, pos, unit);
      if (pos + units > insns.size()) {
        throw MalformedDex("payload data overruns insns_size (unit " + std::to_string(pos) + ")");
      }
      pos += units;
      continue;
    }

    const OpcodeInfo& info = opcode_info(op);
    if (info.width == 0) {
      throw MalformedDex("unassigned opcode " + opcode_display_name(op) + " in instruction stream (unit " +
                         std::to_string(pos) + ")");
    }
    if (pos + info.width > insns.size()) {
      throw MalformedDex("instruction overruns insns_size (unit " + std::to_string(pos) + ")");
    }
    hist.bump(op);
    pos += info.width;
  }
}

}  // namespace

bool looks_like_dex(ByteView data) {
  static const std::uint8_t kMagicPrefix[4] = {0x64, 0x65, 0x78, 0x0a};
  return data.size() >= 8 && std::memcmp(data.data(), kMagicPrefix, 4) == 0;
}

OpcodeHistogram extract_from_dex(ByteView dex, const DexOptions& opts) {
  DexHeader header = parse_header(dex);
  if (opts.verify_checksum) verify_digests(dex, header);

  if (header.class_defs_size != 0 &&
      (header.class_defs_off > dex.size() ||
       static_cast<std::uint64_t>(header.class_defs_off) + static_cast<std::uint64_t>(header.class_defs_size) * 32 >
           dex.size())) {
    throw MalformedDex("class_defs table out of bounds");
  }

  // Distinct code_item offsets; methods sharing a code_item count it once.
  std::set<std::uint32_t> code_offs;
  for (std::uint32_t i = 0; i < header.class_defs_size; ++i) {
    Cursor def(dex, header.class_defs_off + i * 32);
    def.skip(24);  // class_idx .. annotations_off
    std::uint32_t class_data_off = def.u32();
    if (class_data_off == 0) continue;
    if (class_data_off >= dex.size()) {
      throw MalformedDex("class_data offset out of bounds for class_def " + std::to_string(i));
    }

    Cursor data(dex, class_data_off);
    std::uint32_t static_fields = data.uleb128();
    std::uint32_t instance_fields = data.uleb128();
    std::uint32_t direct_methods = data.uleb128();
    std::uint32_t virtual_methods = data.uleb128();
    for (std::uint32_t f = 0; f < static_fields + instance_fields; ++f) {
      data.uleb128();  // field_idx_diff
      data.uleb128();  // access_flags
    }
    for (std::uint32_t m = 0; m < direct_methods + virtual_methods; ++m) {
      data.uleb128();  // method_idx_diff
      data.uleb128();  // access_flags
      std::uint32_t code_off = data.uleb128();
      if (code_off != 0) code_offs.insert(code_off);
    }
  }

  OpcodeHistogram hist;
  for (std::uint32_t off : code_offs) walk_code_item(dex, off, hist);
  return hist;
}

}  // namespace dexsieve
