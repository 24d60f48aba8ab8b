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
#include <string>
#include <string_view>

namespace dexsieve {

inline constexpr int kOpcodeCount = 256;

// Dalvik instruction formats (DEX versions 035-039). The leading digit is
// the instruction width in 16-bit code units.
enum class InsnFormat : std::uint8_t {
  k10x, k12x, k11n, k11x, k10t,
  k20t, k22x, k21t, k21s, k21h, k21c,
  k23x, k22b, k22t, k22s, k22c,
  k30t, k32x, k31i, k31t, k31c, k35c, k3rc,
  k45cc, k4rcc,
  k51l,
  kUnused,
};

struct OpcodeInfo {
  const char* mnemonic;  // "" for unassigned opcode values
  std::uint8_t width;    // code units; 0 for unassigned values
  InsnFormat format;
};

// Full 256-entry table indexed by opcode value.
const OpcodeInfo& opcode_info(std::uint8_t op);

std::string_view opcode_mnemonic(std::uint8_t op);

// Mnemonic if assigned, otherwise "op-0xNN"; used in reports.
std::string opcode_display_name(std::uint8_t op);

// Opcode value for a mnemonic, or -1 if it matches no table entry.
int opcode_from_mnemonic(std::string_view mnemonic);

// Payload pseudo-instructions: a code unit whose low byte is the NOP opcode
// and whose high byte carries one of these idents heads a data table, not an
// executable instruction.
inline constexpr std::uint16_t kPackedSwitchPayloadIdent = 0x0100;
inline constexpr std::uint16_t kSparseSwitchPayloadIdent = 0x0200;
inline constexpr std::uint16_t kFillArrayPayloadIdent = 0x0300;

inline constexpr std::uint8_t kOpNop = 0x00;
inline constexpr std::uint8_t kOpPackedSwitch = 0x2b;
inline constexpr std::uint8_t kOpSparseSwitch = 0x2c;
inline constexpr std::uint8_t kOpFillArrayData = 0x26;

}  // namespace dexsieve
