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
#include <string>
#include <vector>

#include "dexsieve/histogram.hpp"

namespace dexsieve {

struct SmaliDocument {
  std::string name;  // used in diagnostics only
  std::string text;
};

struct SmaliOptions {
  enum class OnUnknown { kFail, kWarnSkip };
  OnUnknown on_unknown = OnUnknown::kFail;
};

struct SmaliWarning {
  std::string document;
  std::size_t line;  // 1-based
  std::string token;
};

// Counts instruction lines inside .method blocks whose leading token is a
// known Dalvik mnemonic. Directives, labels, comments, blank lines, and the
// contents of .packed-switch/.sparse-switch/.array-data/.annotation blocks
// contribute nothing. An unknown token in instruction position throws
// UnknownMnemonic or is collected as a warning, per options.
OpcodeHistogram extract_from_smali(std::span<const SmaliDocument> docs,
                                   const SmaliOptions& opts = {},
                                   std::vector<SmaliWarning>* warnings = nullptr);

}  // namespace dexsieve
