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

#include <filesystem>
#include <string>
#include <vector>

#include "dexsieve/common.hpp"

namespace dexsieve {

Bytes read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

// Write-temp-then-rename; no reader ever observes a partial file.
void atomic_write_file(const std::filesystem::path& path, ByteView data);
void atomic_write_file(const std::filesystem::path& path, const std::string& text);

// Splits on a delimiter, keeping empty fields.
std::vector<std::string> split(const std::string& line, char delim);

std::string trim(const std::string& s);

// Fixed-precision decimal formatting; all report files go through these so
// output stays byte-identical across runs.
std::string format_double(double v, int precision);
std::string format_percent(double v);  // two decimals, e.g. "96.32"

}  // namespace dexsieve
