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

#include "dexsieve/dex_builder.hpp"

#include <cstring>

#include "dexsieve/digest.hpp"
#include "dexsieve/opcode_table.hpp"

namespace dexsieve {

namespace {

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void patch_u32(Bytes& out, std::size_t off, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[off + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

// Non-canonical fixed-width ULEB128 so class_data layout is known before
// code item offsets are.
void put_uleb_fixed4(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>((v & 0x7f) | 0x80));
  out.push_back(static_cast<std::uint8_t>(((v >> 7) & 0x7f) | 0x80));
  out.push_back(static_cast<std::uint8_t>(((v >> 14) & 0x7f) | 0x80));
  out.push_back(static_cast<std::uint8_t>((v >> 21) & 0x7f));
}

void put_uleb(Bytes& out, std::uint32_t v) {
  do {
    std::uint8_t b = v & 0x7f;
    v >>= 7;
    if (v != 0) b |= 0x80;
    out.push_back(b);
  } while (v != 0);
}

struct PayloadRef {
  std::size_t insn_unit;  // unit index of the 31t instruction
  std::uint16_t ident;
};

}  // namespace

std::vector<std::uint8_t> encode_instructions(std::span<const std::uint8_t> opcodes,
                                              std::vector<std::uint16_t>& units_out) {
  std::vector<std::uint8_t> encoded(opcodes.begin(), opcodes.end());
  units_out.clear();

  std::vector<PayloadRef> refs;
  bool need_packed = false, need_sparse = false, need_fill = false;

  auto emit = [&](std::uint8_t op) {
    const OpcodeInfo& info = opcode_info(op);
    if (info.width == 0) {
      throw InvalidSpec("cannot encode unassigned opcode " + opcode_display_name(op));
    }
    if (op == kOpPackedSwitch) {
      refs.push_back({units_out.size(), kPackedSwitchPayloadIdent});
      need_packed = true;
    } else if (op == kOpSparseSwitch) {
      refs.push_back({units_out.size(), kSparseSwitchPayloadIdent});
      need_sparse = true;
    } else if (op == kOpFillArrayData) {
      refs.push_back({units_out.size(), kFillArrayPayloadIdent});
      need_fill = true;
    }
    units_out.push_back(op);  // operand bits zero
    for (int i = 1; i < info.width; ++i) units_out.push_back(0);
  };

  for (std::uint8_t op : opcodes) emit(op);

  if (need_packed || need_sparse || need_fill) {
    if (units_out.size() % 2 != 0) {
      encoded.push_back(kOpNop);
      emit(kOpNop);
    }

    std::size_t packed_at = 0, sparse_at = 0, fill_at = 0;
    if (need_packed) {
      packed_at = units_out.size();
      units_out.push_back(kPackedSwitchPayloadIdent);
      units_out.push_back(2);                                // entry count
      for (int i = 0; i < 2; ++i) units_out.push_back(0);    // first_key
      for (int i = 0; i < 4; ++i) units_out.push_back(0);    // two targets
    }
    if (need_sparse) {
      sparse_at = units_out.size();
      units_out.push_back(kSparseSwitchPayloadIdent);
      units_out.push_back(2);                                // entry count
      for (int i = 0; i < 8; ++i) units_out.push_back(0);    // keys + targets
    }
    if (need_fill) {
      fill_at = units_out.size();
      units_out.push_back(kFillArrayPayloadIdent);
      units_out.push_back(4);  // element_width
      units_out.push_back(2);  // element_count lo
      units_out.push_back(0);  // element_count hi
      for (int i = 0; i < 4; ++i) units_out.push_back(0);  // 8 data bytes
    }

    for (const PayloadRef& ref : refs) {
      std::size_t target = ref.ident == kPackedSwitchPayloadIdent  ? packed_at
                           : ref.ident == kSparseSwitchPayloadIdent ? sparse_at
                                                                    : fill_at;
      std::int32_t delta = static_cast<std::int32_t>(target) - static_cast<std::int32_t>(ref.insn_unit);
      units_out[ref.insn_unit + 1] = static_cast<std::uint16_t>(delta & 0xffff);
      units_out[ref.insn_unit + 2] = static_cast<std::uint16_t>((delta >> 16) & 0xffff);
    }
  }

  return encoded;
}

Bytes build_minimal_dex(std::span<const std::vector<std::uint16_t>> method_units) {
  const std::size_t method_count = method_units.size();

  // class_data: four uleb sizes + per method (idx_diff, access, fixed4 code_off)
  Bytes class_data;
  put_uleb(class_data, 0);  // static_fields
  put_uleb(class_data, 0);  // instance_fields
  put_uleb(class_data, static_cast<std::uint32_t>(method_count));
  put_uleb(class_data, 0);  // virtual_methods
  std::vector<std::size_t> code_off_slots;
  for (std::size_t m = 0; m < method_count; ++m) {
    put_uleb(class_data, m == 0 ? 0 : 1);  // method_idx_diff
    put_uleb(class_data, 0x0008);          // ACC_STATIC
    code_off_slots.push_back(class_data.size());
    put_uleb_fixed4(class_data, 0);  // patched below
  }

  const std::size_t header_at = 0;
  const std::size_t class_defs_at = 0x70;
  const std::size_t class_data_at = class_defs_at + 32;
  std::size_t cursor = class_data_at + class_data.size();

  std::vector<std::size_t> code_item_offs;
  for (std::size_t m = 0; m < method_count; ++m) {
    cursor = (cursor + 3) & ~std::size_t{3};  // code items are 4-aligned
    code_item_offs.push_back(cursor);
    cursor += 16 + method_units[m].size() * 2;
  }
  const std::size_t file_size = cursor;

  for (std::size_t m = 0; m < method_count; ++m) {
    std::uint32_t off = static_cast<std::uint32_t>(code_item_offs[m]);
    Bytes patched;
    put_uleb_fixed4(patched, off);
    std::memcpy(class_data.data() + code_off_slots[m], patched.data(), 4);
  }

  Bytes out;
  out.reserve(file_size);

  // header
  out.insert(out.end(), {0x64, 0x65, 0x78, 0x0a, '0', '3', '5', 0x00});  // magic
  put_u32(out, 0);                                                       // checksum, patched last
  for (int i = 0; i < 20; ++i) out.push_back(0);                         // signature, patched
  put_u32(out, static_cast<std::uint32_t>(file_size));
  put_u32(out, 0x70);        // header_size
  put_u32(out, 0x12345678);  // endian_tag
  put_u32(out, 0);           // link_size
  put_u32(out, 0);           // link_off
  put_u32(out, 0);           // map_off
  for (int i = 0; i < 10; ++i) put_u32(out, 0);  // string/type/proto/field/method ids
  put_u32(out, 1);                               // class_defs_size
  put_u32(out, static_cast<std::uint32_t>(class_defs_at));
  put_u32(out, static_cast<std::uint32_t>(file_size - class_data_at));  // data_size
  put_u32(out, static_cast<std::uint32_t>(class_data_at));              // data_off
  if (out.size() != 0x70) throw Error("internal: header layout is not 0x70 bytes");

  // class_def_item
  put_u32(out, 0);           // class_idx
  put_u32(out, 0x0001);      // access_flags: public
  put_u32(out, 0xffffffff);  // superclass_idx: NO_INDEX
  put_u32(out, 0);           // interfaces_off
  put_u32(out, 0xffffffff);  // source_file_idx: NO_INDEX
  put_u32(out, 0);           // annotations_off
  put_u32(out, static_cast<std::uint32_t>(class_data_at));
  put_u32(out, 0);  // static_values_off

  out.insert(out.end(), class_data.begin(), class_data.end());

  for (std::size_t m = 0; m < method_count; ++m) {
    while (out.size() < code_item_offs[m]) out.push_back(0);
    put_u16(out, 1);  // registers_size
    put_u16(out, 0);  // ins_size
    put_u16(out, 0);  // outs_size
    put_u16(out, 0);  // tries_size
    put_u32(out, 0);  // debug_info_off
    put_u32(out, static_cast<std::uint32_t>(method_units[m].size()));
    for (std::uint16_t unit : method_units[m]) put_u16(out, unit);
  }
  if (out.size() != file_size) throw Error("internal: dex layout size mismatch");

  // signature first (checksum covers it), then checksum
  auto sig = sha1(ByteView(out).subspan(32));
  std::memcpy(out.data() + 12, sig.data(), 20);
  patch_u32(out, 8, adler32_checksum(ByteView(out).subspan(12)));
  (void)header_at;
  return out;
}

Bytes build_minimal_dex_from_opcodes(std::span<const std::uint8_t> opcodes,
                                     std::vector<std::uint8_t>* encoded_out) {
  std::vector<std::uint16_t> units;
  auto encoded = encode_instructions(opcodes, units);
  if (encoded_out) *encoded_out = std::move(encoded);
  std::vector<std::vector<std::uint16_t>> methods{std::move(units)};
  return build_minimal_dex(methods);
}

}  // namespace dexsieve
