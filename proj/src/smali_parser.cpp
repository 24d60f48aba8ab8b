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

#include "dexsieve/smali_parser.hpp"

#include <string_view>

#include "dexsieve/common.hpp"

namespace dexsieve {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Cuts a trailing '#' comment, ignoring '#' inside string or char literals.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  bool in_char = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if ((in_string || in_char) && c == '\\') {
      ++i;  // skip escaped char
      continue;
    }
    if (!in_char && c == '"') in_string = !in_string;
    else if (!in_string && c == '\'') in_char = !in_char;
    else if (!in_string && !in_char && c == '#') return line.substr(0, i);
  }
  return line;
}

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view first_token(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !is_space(s[i])) ++i;
  return s.substr(0, i);
}

std::string_view second_token(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !is_space(s[i])) ++i;
  while (i < s.size() && is_space(s[i])) ++i;
  std::size_t j = i;
  while (j < s.size() && !is_space(s[j])) ++j;
  return s.substr(i, j - i);
}

// Directive blocks whose body lines are data or annotation values rather
// than instructions.
bool opens_skip_block(std::string_view directive) {
  return directive == ".packed-switch" || directive == ".sparse-switch" ||
         directive == ".array-data" || directive == ".annotation";
}

bool closes_skip_block(std::string_view directive, std::string_view arg) {
  if (directive != ".end") return false;
  return arg == "packed-switch" || arg == "sparse-switch" || arg == "array-data" ||
         arg == "annotation";
}

}  // namespace

OpcodeHistogram extract_from_smali(std::span<const SmaliDocument> docs, const SmaliOptions& opts,
                                   std::vector<SmaliWarning>* warnings) {
  OpcodeHistogram hist;
  for (const SmaliDocument& doc : docs) {
    bool in_method = false;
    int skip_depth = 0;
    std::size_t line_no = 0;

    std::string_view rest = doc.text;
    while (!rest.empty()) {
      ++line_no;
      std::size_t nl = rest.find('\n');
      std::string_view raw = (nl == std::string_view::npos) ? rest : rest.substr(0, nl);
      rest = (nl == std::string_view::npos) ? std::string_view{} : rest.substr(nl + 1);

      std::string_view line = trim_view(strip_comment(raw));
      if (line.empty()) continue;

      if (line.front() == '.') {
        std::string_view directive = first_token(line);
        if (directive == ".method") {
          in_method = true;
          skip_depth = 0;
        } else if (directive == ".end" && second_token(line) == "method") {
          in_method = false;
          skip_depth = 0;
        } else if (opens_skip_block(directive)) {
          ++skip_depth;
        } else if (closes_skip_block(directive, second_token(line))) {
          if (skip_depth > 0) --skip_depth;
        }
        continue;
      }
      if (!in_method || skip_depth > 0) continue;
      if (line.front() == ':') continue;  // label

      std::string_view mnemonic = first_token(line);
      int op = opcode_from_mnemonic(mnemonic);
      if (op < 0) {
        if (opts.on_unknown == SmaliOptions::OnUnknown::kFail) {
          throw UnknownMnemonic(doc.name + ":" + std::to_string(line_no) + ": unknown mnemonic '" +
                                std::string(mnemonic) + "'");
        }
        if (warnings) warnings->push_back({doc.name, line_no, std::string(mnemonic)});
        continue;
      }
      hist.bump(static_cast<std::uint8_t>(op));
    }
  }
  return hist;
}

}  // namespace dexsieve
