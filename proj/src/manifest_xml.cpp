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

#include "dexsieve/manifest_xml.hpp"

#include <cctype>

#include "dexsieve/common.hpp"

namespace dexsieve {

namespace {

bool is_xml_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out.push_back(raw[i]);
      continue;
    }
    std::size_t semi = raw.find(';', i);
    if (semi == std::string_view::npos) throw MalformedXml("unterminated entity reference");
    std::string_view ent = raw.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      // numeric references only matter for ASCII in permission names
      long cp = 0;
      try {
        cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                 ? std::stol(std::string(ent.substr(2)), nullptr, 16)
                 : std::stol(std::string(ent.substr(1)), nullptr, 10);
      } catch (const std::exception&) {
        throw MalformedXml("bad numeric character reference '&" + std::string(ent) + ";'");
      }
      if (cp <= 0 || cp > 0x10ffff) throw MalformedXml("character reference out of range");
      if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
      } else {
        // re-encode as UTF-8
        if (cp < 0x800) {
          out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        } else if (cp < 0x10000) {
          out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        } else {
          out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        }
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
      }
    } else {
      throw MalformedXml("unknown entity '&" + std::string(ent) + ";'");
    }
    i = semi;
  }
  return out;
}

struct Attribute {
  std::string name;
  std::string value;
};

}  // namespace

PermissionSet parse_manifest_text(std::string_view text) {
  PermissionSet perms;

  // UTF-8 BOM
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xef &&
      static_cast<unsigned char>(text[1]) == 0xbb && static_cast<unsigned char>(text[2]) == 0xbf) {
    text.remove_prefix(3);
  }

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      std::size_t end = text.find("-->", i + 4);
      if (end == std::string_view::npos) throw MalformedXml("unterminated comment");
      i = end + 3;
      continue;
    }
    if (text.compare(i, 9, "<![CDATA[") == 0) {
      std::size_t end = text.find("]]>", i + 9);
      if (end == std::string_view::npos) throw MalformedXml("unterminated CDATA section");
      i = end + 3;
      continue;
    }
    if (i + 1 < n && (text[i + 1] == '!' || text[i + 1] == '?')) {
      std::size_t end = text.find('>', i);
      if (end == std::string_view::npos) throw MalformedXml("unterminated declaration");
      i = end + 1;
      continue;
    }
    if (i + 1 < n && text[i + 1] == '/') {
      std::size_t end = text.find('>', i);
      if (end == std::string_view::npos) throw MalformedXml("unterminated end tag");
      i = end + 1;
      continue;
    }

    // start tag
    std::size_t p = i + 1;
    std::size_t name_start = p;
    while (p < n && !is_xml_space(text[p]) && text[p] != '>' && text[p] != '/') ++p;
    if (p == name_start) throw MalformedXml("empty element name");
    std::string_view elem = text.substr(name_start, p - name_start);

    std::vector<Attribute> attrs;
    for (;;) {
      while (p < n && is_xml_space(text[p])) ++p;
      if (p >= n) throw MalformedXml("unterminated start tag for <" + std::string(elem) + ">");
      if (text[p] == '>') {
        ++p;
        break;
      }
      if (text[p] == '/') {
        if (p + 1 >= n || text[p + 1] != '>') throw MalformedXml("stray '/' in start tag");
        p += 2;
        break;
      }
      std::size_t an = p;
      while (p < n && text[p] != '=' && !is_xml_space(text[p]) && text[p] != '>') ++p;
      std::string attr_name(text.substr(an, p - an));
      while (p < n && is_xml_space(text[p])) ++p;
      if (p >= n || text[p] != '=') {
        throw MalformedXml("attribute '" + attr_name + "' missing '='");
      }
      ++p;
      while (p < n && is_xml_space(text[p])) ++p;
      if (p >= n || (text[p] != '"' && text[p] != '\'')) {
        throw MalformedXml("attribute '" + attr_name + "' missing quoted value");
      }
      char quote = text[p++];
      std::size_t vstart = p;
      while (p < n && text[p] != quote) ++p;
      if (p >= n) throw MalformedXml("unterminated attribute value for '" + attr_name + "'");
      attrs.push_back({std::move(attr_name), decode_entities(text.substr(vstart, p - vstart))});
      ++p;
    }
    i = p;

    if (elem != "uses-permission" && elem != "uses-permission-sdk-23") continue;
    for (const Attribute& a : attrs) {
      if (a.name == "android:name" || a.name == "name") {
        perms.add(a.value);
        break;
      }
    }
  }
  return perms;
}

}  // namespace dexsieve
