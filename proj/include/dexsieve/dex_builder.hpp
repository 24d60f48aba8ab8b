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

#include <span>
#include <vector>

#include "dexsieve/common.hpp"

namespace dexsieve {

// Minimal DEX assembler covering just enough of the format for histogram
// parity fixtures and synthetic corpora: one class, one or more methods,
// operands zeroed, correct instruction widths, switch/fill-array payloads
// appended with patched branch offsets, valid header digests. The id tables
// are left empty, so the output is not installable bytecode - it exists to
// be read back by extract_from_dex.

// Encodes an instruction sequence (one opcode per instruction) into code
// units. When the sequence uses packed-switch/sparse-switch/fill-array-data,
// a shared payload per kind is appended; if payload alignment needs one unit
// of padding, a real nop instruction is inserted first. Returns the opcode
// sequence actually encoded (the input plus that possible nop), which is
// what the resulting code item's histogram reflects.
std::vector<std::uint8_t> encode_instructions(std::span<const std::uint8_t> opcodes,
                                              std::vector<std::uint16_t>& units_out);

// One code item per entry of method_units.
Bytes build_minimal_dex(std::span<const std::vector<std::uint16_t>> method_units);

// Convenience: single method holding the given instruction sequence.
// encoded_out, when non-null, receives the opcode sequence actually encoded.
Bytes build_minimal_dex_from_opcodes(std::span<const std::uint8_t> opcodes,
                                     std::vector<std::uint8_t>* encoded_out = nullptr);

}  // namespace dexsieve
