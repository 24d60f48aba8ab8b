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

#include "dexsieve/common.hpp"
#include "dexsieve/histogram.hpp"

namespace dexsieve {

struct DexOptions {
  // Malware corpora routinely carry deliberately broken header digests that
  // still parse, so verification is opt-in. When set, both the Adler-32
  // checksum and the SHA-1 signature fields are checked.
  bool verify_checksum = false;
};

// Walks every code_item reachable from the class_defs table and counts one
// histogram bucket per decoded instruction. Instruction widths follow the
// published format table; packed-switch/sparse-switch/fill-array-data
// payload tables are skipped as data. Throws MalformedDex on anything that
// cannot be walked safely (bad magic, truncated structures, offsets out of
// bounds, unknown opcodes, instruction streams overrunning insns_size).
OpcodeHistogram extract_from_dex(ByteView dex, const DexOptions& opts = {});

// True when the buffer starts with a plausible DEX magic (any version).
bool looks_like_dex(ByteView data);

}  // namespace dexsieve
