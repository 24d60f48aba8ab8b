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

#include "dexsieve/opcode_table.hpp"

#include <cstdio>
#include <unordered_map>

namespace dexsieve {

namespace {

using F = InsnFormat;

#define UNUSED_OP {"", 0, F::kUnused}

const OpcodeInfo kOpcodes[kOpcodeCount] = {
    /* 0x00 */ {"nop", 1, F::k10x},
    /* 0x01 */ {"move", 1, F::k12x},
    /* 0x02 */ {"move/from16", 2, F::k22x},
    /* 0x03 */ {"move/16", 3, F::k32x},
    /* 0x04 */ {"move-wide", 1, F::k12x},
    /* 0x05 */ {"move-wide/from16", 2, F::k22x},
    /* 0x06 */ {"move-wide/16", 3, F::k32x},
    /* 0x07 */ {"move-object", 1, F::k12x},
    /* 0x08 */ {"move-object/from16", 2, F::k22x},
    /* 0x09 */ {"move-object/16", 3, F::k32x},
    /* 0x0a */ {"move-result", 1, F::k11x},
    /* 0x0b */ {"move-result-wide", 1, F::k11x},
    /* 0x0c */ {"move-result-object", 1, F::k11x},
    /* 0x0d */ {"move-exception", 1, F::k11x},
    /* 0x0e */ {"return-void", 1, F::k10x},
    /* 0x0f */ {"return", 1, F::k11x},
    /* 0x10 */ {"return-wide", 1, F::k11x},
    /* 0x11 */ {"return-object", 1, F::k11x},
    /* 0x12 */ {"const/4", 1, F::k11n},
    /* 0x13 */ {"const/16", 2, F::k21s},
    /* 0x14 */ {"const", 3, F::k31i},
    /* 0x15 */ {"const/high16", 2, F::k21h},
    /* 0x16 */ {"const-wide/16", 2, F::k21s},
    /* 0x17 */ {"const-wide/32", 3, F::k31i},
    /* 0x18 */ {"const-wide", 5, F::k51l},
    /* 0x19 */ {"const-wide/high16", 2, F::k21h},
    /* 0x1a */ {"const-string", 2, F::k21c},
    /* 0x1b */ {"const-string/jumbo", 3, F::k31c},
    /* 0x1c */ {"const-class", 2, F::k21c},
    /* 0x1d */ {"monitor-enter", 1, F::k11x},
    /* 0x1e */ {"monitor-exit", 1, F::k11x},
    /* 0x1f */ {"check-cast", 2, F::k21c},
    /* 0x20 */ {"instance-of", 2, F::k22c},
    /* 0x21 */ {"array-length", 1, F::k12x},
    /* 0x22 */ {"new-instance", 2, F::k21c},
    /* 0x23 */ {"new-array", 2, F::k22c},
    /* 0x24 */ {"filled-new-array", 3, F::k35c},
    /* 0x25 */ {"filled-new-array/range", 3, F::k3rc},
    /* 0x26 */ {"fill-array-data", 3, F::k31t},
    /* 0x27 */ {"throw", 1, F::k11x},
    /* 0x28 */ {"goto", 1, F::k10t},
    /* 0x29 */ {"goto/16", 2, F::k20t},
    /* 0x2a */ {"goto/32", 3, F::k30t},
    /* 0x2b */ {"packed-switch", 3, F::k31t},
    /* 0x2c */ {"sparse-switch", 3, F::k31t},
    /* 0x2d */ {"cmpl-float", 2, F::k23x},
    /* 0x2e */ {"cmpg-float", 2, F::k23x},
    /* 0x2f */ {"cmpl-double", 2, F::k23x},
    /* 0x30 */ {"cmpg-double", 2, F::k23x},
    /* 0x31 */ {"cmp-long", 2, F::k23x},
    /* 0x32 */ {"if-eq", 2, F::k22t},
    /* 0x33 */ {"if-ne", 2, F::k22t},
    /* 0x34 */ {"if-lt", 2, F::k22t},
    /* 0x35 */ {"if-ge", 2, F::k22t},
    /* 0x36 */ {"if-gt", 2, F::k22t},
    /* 0x37 */ {"if-le", 2, F::k22t},
    /* 0x38 */ {"if-eqz", 2, F::k21t},
    /* 0x39 */ {"if-nez", 2, F::k21t},
    /* 0x3a */ {"if-ltz", 2, F::k21t},
    /* 0x3b */ {"if-gez", 2, F::k21t},
    /* 0x3c */ {"if-gtz", 2, F::k21t},
    /* 0x3d */ {"if-lez", 2, F::k21t},
    /* 0x3e */ UNUSED_OP,
    /* 0x3f */ UNUSED_OP,
    /* 0x40 */ UNUSED_OP,
    /* 0x41 */ UNUSED_OP,
    /* 0x42 */ UNUSED_OP,
    /* 0x43 */ UNUSED_OP,
    /* 0x44 */ {"aget", 2, F::k23x},
    /* 0x45 */ {"aget-wide", 2, F::k23x},
    /* 0x46 */ {"aget-object", 2, F::k23x},
    /* 0x47 */ {"aget-boolean", 2, F::k23x},
    /* 0x48 */ {"aget-byte", 2, F::k23x},
    /* 0x49 */ {"aget-char", 2, F::k23x},
    /* 0x4a */ {"aget-short", 2, F::k23x},
    /* 0x4b */ {"aput", 2, F::k23x},
    /* 0x4c */ {"aput-wide", 2, F::k23x},
    /* 0x4d */ {"aput-object", 2, F::k23x},
    /* 0x4e */ {"aput-boolean", 2, F::k23x},
    /* 0x4f */ {"aput-byte", 2, F::k23x},
    /* 0x50 */ {"aput-char", 2, F::k23x},
    /* 0x51 */ {"aput-short", 2, F::k23x},
    /* 0x52 */ {"iget", 2, F::k22c},
    /* 0x53 */ {"iget-wide", 2, F::k22c},
    /* 0x54 */ {"iget-object", 2, F::k22c},
    /* 0x55 */ {"iget-boolean", 2, F::k22c},
    /* 0x56 */ {"iget-byte", 2, F::k22c},
    /* 0x57 */ {"iget-char", 2, F::k22c},
    /* 0x58 */ {"iget-short", 2, F::k22c},
    /* 0x59 */ {"iput", 2, F::k22c},
    /* 0x5a */ {"iput-wide", 2, F::k22c},
    /* 0x5b */ {"iput-object", 2, F::k22c},
    /* 0x5c */ {"iput-boolean", 2, F::k22c},
    /* 0x5d */ {"iput-byte", 2, F::k22c},
    /* 0x5e */ {"iput-char", 2, F::k22c},
    /* 0x5f */ {"iput-short", 2, F::k22c},
    /* 0x60 */ {"sget", 2, F::k21c},
    /* 0x61 */ {"sget-wide", 2, F::k21c},
    /* 0x62 */ {"sget-object", 2, F::k21c},
    /* 0x63 */ {"sget-boolean", 2, F::k21c},
    /* 0x64 */ {"sget-byte", 2, F::k21c},
    /* 0x65 */ {"sget-char", 2, F::k21c},
    /* 0x66 */ {"sget-short", 2, F::k21c},
    /* 0x67 */ {"sput", 2, F::k21c},
    /* 0x68 */ {"sput-wide", 2, F::k21c},
    /* 0x69 */ {"sput-object", 2, F::k21c},
    /* 0x6a */ {"sput-boolean", 2, F::k21c},
    /* 0x6b */ {"sput-byte", 2, F::k21c},
    /* 0x6c */ {"sput-char", 2, F::k21c},
    /* 0x6d */ {"sput-short", 2, F::k21c},
    /* 0x6e */ {"invoke-virtual", 3, F::k35c},
    /* 0x6f */ {"invoke-super", 3, F::k35c},
    /* 0x70 */ {"invoke-direct", 3, F::k35c},
    /* 0x71 */ {"invoke-static", 3, F::k35c},
    /* 0x72 */ {"invoke-interface", 3, F::k35c},
    /* 0x73 */ UNUSED_OP,
    /* 0x74 */ {"invoke-virtual/range", 3, F::k3rc},
    /* 0x75 */ {"invoke-super/range", 3, F::k3rc},
    /* 0x76 */ {"invoke-direct/range", 3, F::k3rc},
    /* 0x77 */ {"invoke-static/range", 3, F::k3rc},
    /* 0x78 */ {"invoke-interface/range", 3, F::k3rc},
    /* 0x79 */ UNUSED_OP,
    /* 0x7a */ UNUSED_OP,
    /* 0x7b */ {"neg-int", 1, F::k12x},
    /* 0x7c */ {"not-int", 1, F::k12x},
    /* 0x7d */ {"neg-long", 1, F::k12x},
    /* 0x7e */ {"not-long", 1, F::k12x},
    /* 0x7f */ {"neg-float", 1, F::k12x},
    /* 0x80 */ {"neg-double", 1, F::k12x},
    /* 0x81 */ {"int-to-long", 1, F::k12x},
    /* 0x82 */ {"int-to-float", 1, F::k12x},
    /* 0x83 */ {"int-to-double", 1, F::k12x},
    /* 0x84 */ {"long-to-int", 1, F::k12x},
    /* 0x85 */ {"long-to-float", 1, F::k12x},
    /* 0x86 */ {"long-to-double", 1, F::k12x},
    /* 0x87 */ {"float-to-int", 1, F::k12x},
    /* 0x88 */ {"float-to-long", 1, F::k12x},
    /* 0x89 */ {"float-to-double", 1, F::k12x},
    /* 0x8a */ {"double-to-int", 1, F::k12x},
    /* 0x8b */ {"double-to-long", 1, F::k12x},
    /* 0x8c */ {"double-to-float", 1, F::k12x},
    /* 0x8d */ {"int-to-byte", 1, F::k12x},
    /* 0x8e */ {"int-to-char", 1, F::k12x},
    /* 0x8f */ {"int-to-short", 1, F::k12x},
    /* 0x90 */ {"add-int", 2, F::k23x},
    /* 0x91 */ {"sub-int", 2, F::k23x},
    /* 0x92 */ {"mul-int", 2, F::k23x},
    /* 0x93 */ {"div-int", 2, F::k23x},
    /* 0x94 */ {"rem-int", 2, F::k23x},
    /* 0x95 */ {"and-int", 2, F::k23x},
    /* 0x96 */ {"or-int", 2, F::k23x},
    /* 0x97 */ {"xor-int", 2, F::k23x},
    /* 0x98 */ {"shl-int", 2, F::k23x},
    /* 0x99 */ {"shr-int", 2, F::k23x},
    /* 0x9a */ {"ushr-int", 2, F::k23x},
    /* 0x9b */ {"add-long", 2, F::k23x},
    /* 0x9c */ {"sub-long", 2, F::k23x},
    /* 0x9d */ {"mul-long", 2, F::k23x},
    /* 0x9e */ {"div-long", 2, F::k23x},
    /* 0x9f */ {"rem-long", 2, F::k23x},
    /* 0xa0 */ {"and-long", 2, F::k23x},
    /* 0xa1 */ {"or-long", 2, F::k23x},
    /* 0xa2 */ {"xor-long", 2, F::k23x},
    /* 0xa3 */ {"shl-long", 2, F::k23x},
    /* 0xa4 */ {"shr-long", 2, F::k23x},
    /* 0xa5 */ {"ushr-long", 2, F::k23x},
    /* 0xa6 */ {"add-float", 2, F::k23x},
    /* 0xa7 */ {"sub-float", 2, F::k23x},
    /* 0xa8 */ {"mul-float", 2, F::k23x},
    /* 0xa9 */ {"div-float", 2, F::k23x},
    /* 0xaa */ {"rem-float", 2, F::k23x},
    /* 0xab */ {"add-double", 2, F::k23x},
    /* 0xac */ {"sub-double", 2, F::k23x},
    /* 0xad */ {"mul-double", 2, F::k23x},
    /* 0xae */ {"div-double", 2, F::k23x},
    /* 0xaf */ {"rem-double", 2, F::k23x},
    /* 0xb0 */ {"add-int/2addr", 1, F::k12x},
    /* 0xb1 */ {"sub-int/2addr", 1, F::k12x},
    /* 0xb2 */ {"mul-int/2addr", 1, F::k12x},
    /* 0xb3 */ {"div-int/2addr", 1, F::k12x},
    /* 0xb4 */ {"rem-int/2addr", 1, F::k12x},
    /* 0xb5 */ {"and-int/2addr", 1, F::k12x},
    /* 0xb6 */ {"or-int/2addr", 1, F::k12x},
    /* 0xb7 */ {"xor-int/2addr", 1, F::k12x},
    /* 0xb8 */ {"shl-int/2addr", 1, F::k12x},
    /* 0xb9 */ {"shr-int/2addr", 1, F::k12x},
    /* 0xba */ {"ushr-int/2addr", 1, F::k12x},
    /* 0xbb */ {"add-long/2addr", 1, F::k12x},
    /* 0xbc */ {"sub-long/2addr", 1, F::k12x},
    /* 0xbd */ {"mul-long/2addr", 1, F::k12x},
    /* 0xbe */ {"div-long/2addr", 1, F::k12x},
    /* 0xbf */ {"rem-long/2addr", 1, F::k12x},
    /* 0xc0 */ {"and-long/2addr", 1, F::k12x},
    /* 0xc1 */ {"or-long/2addr", 1, F::k12x},
    /* 0xc2 */ {"xor-long/2addr", 1, F::k12x},
    /* 0xc3 */ {"shl-long/2addr", 1, F::k12x},
    /* 0xc4 */ {"shr-long/2addr", 1, F::k12x},
    /* 0xc5 */ {"ushr-long/2addr", 1, F::k12x},
    /* 0xc6 */ {"add-float/2addr", 1, F::k12x},
    /* 0xc7 */ {"sub-float/2addr", 1, F::k12x},
    /* 0xc8 */ {"mul-float/2addr", 1, F::k12x},
    /* 0xc9 */ {"div-float/2addr", 1, F::k12x},
    /* 0xca */ {"rem-float/2addr", 1, F::k12x},
    /* 0xcb */ {"add-double/2addr", 1, F::k12x},
    /* 0xcc */ {"sub-double/2addr", 1, F::k12x},
    /* 0xcd */ {"mul-double/2addr", 1, F::k12x},
    /* 0xce */ {"div-double/2addr", 1, F::k12x},
    /* 0xcf */ {"rem-double/2addr", 1, F::k12x},
    /* 0xd0 */ {"add-int/lit16", 2, F::k22s},
    /* 0xd1 */ {"rsub-int", 2, F::k22s},
    /* 0xd2 */ {"mul-int/lit16", 2, F::k22s},
    /* 0xd3 */ {"div-int/lit16", 2, F::k22s},
    /* 0xd4 */ {"rem-int/lit16", 2, F::k22s},
    /* 0xd5 */ {"and-int/lit16", 2, F::k22s},
    /* 0xd6 */ {"or-int/lit16", 2, F::k22s},
    /* 0xd7 */ {"xor-int/lit16", 2, F::k22s},
    /* 0xd8 */ {"add-int/lit8", 2, F::k22b},
    /* 0xd9 */ {"rsub-int/lit8", 2, F::k22b},
    /* 0xda */ {"mul-int/lit8", 2, F::k22b},
    /* 0xdb */ {"div-int/lit8", 2, F::k22b},
    /* 0xdc */ {"rem-int/lit8", 2, F::k22b},
    /* 0xdd */ {"and-int/lit8", 2, F::k22b},
    /* 0xde */ {"or-int/lit8", 2, F::k22b},
    /* 0xdf */ {"xor-int/lit8", 2, F::k22b},
    /* 0xe0 */ {"shl-int/lit8", 2, F::k22b},
    /* 0xe1 */ {"shr-int/lit8", 2, F::k22b},
    /* 0xe2 */ {"ushr-int/lit8", 2, F::k22b},
    /* 0xe3 */ UNUSED_OP,
    /* 0xe4 */ UNUSED_OP,
    /* 0xe5 */ UNUSED_OP,
    /* 0xe6 */ UNUSED_OP,
    /* 0xe7 */ UNUSED_OP,
    /* 0xe8 */ UNUSED_OP,
    /* 0xe9 */ UNUSED_OP,
    /* 0xea */ UNUSED_OP,
    /* 0xeb */ UNUSED_OP,
    /* 0xec */ UNUSED_OP,
    /* 0xed */ UNUSED_OP,
    /* 0xee */ UNUSED_OP,
    /* 0xef */ UNUSED_OP,
    /* 0xf0 */ UNUSED_OP,
    /* 0xf1 */ UNUSED_OP,
    /* 0xf2 */ UNUSED_OP,
    /* 0xf3 */ UNUSED_OP,
    /* 0xf4 */ UNUSED_OP,
    /* 0xf5 */ UNUSED_OP,
    /* 0xf6 */ UNUSED_OP,
    /* 0xf7 */ UNUSED_OP,
    /* 0xf8 */ UNUSED_OP,
    /* 0xf9 */ UNUSED_OP,
    /* 0xfa */ {"invoke-polymorphic", 4, F::k45cc},
    /* 0xfb */ {"invoke-polymorphic/range", 4, F::k4rcc},
    /* 0xfc */ {"invoke-custom", 3, F::k35c},
    /* 0xfd */ {"invoke-custom/range", 3, F::k3rc},
    /* 0xfe */ {"const-method-handle", 2, F::k21c},
    /* 0xff */ {"const-method-type", 2, F::k21c},
};

#undef UNUSED_OP

const std::unordered_map<std::string_view, int>& mnemonic_map() {
  static const std::unordered_map<std::string_view, int> map = [] {
    std::unordered_map<std::string_view, int> m;
    for (int op = 0; op < kOpcodeCount; ++op) {
      std::string_view name = kOpcodes[op].mnemonic;
      if (!name.empty()) m.emplace(name, op);
    }
    return m;
  }();
  return map;
}

}  // namespace

const OpcodeInfo& opcode_info(std::uint8_t op) { return kOpcodes[op]; }

std::string_view opcode_mnemonic(std::uint8_t op) { return kOpcodes[op].mnemonic; }

std::string opcode_display_name(std::uint8_t op) {
  std::string_view name = kOpcodes[op].mnemonic;
  if (!name.empty()) return std::string(name);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "op-0x%02x", op);
  return buf;
}

int opcode_from_mnemonic(std::string_view mnemonic) {
  const auto& m = mnemonic_map();
  auto it = m.find(mnemonic);
  return it == m.end() ? -1 : it->second;
}

}  // namespace dexsieve
