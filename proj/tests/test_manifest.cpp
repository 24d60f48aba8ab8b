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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "dexsieve/axml_parser.hpp"
#include "dexsieve/manifest_xml.hpp"
#include "dexsieve/synthetic.hpp"
#include "test_util.hpp"

using namespace dexsieve;

namespace {

const char* kCallPhone = "android.permission.CALL_PHONE";

}  // namespace

TEST_CASE("axml: manifest declaring CALL_PHONE") {
  for (bool utf8 : {false, true}) {
    testutil::AxmlWriter writer(utf8);
    Bytes axml = writer.manifest_with_permissions({kCallPhone});
    CHECK(looks_like_axml(axml));
    PermissionSet perms = parse_axml(axml);
    CHECK(perms.permissions == std::set<std::string>{kCallPhone});
  }
}

TEST_CASE("axml: zero uses-permission elements give the empty set") {
  testutil::AxmlWriter writer(false);
  PermissionSet perms = parse_axml(writer.manifest_with_permissions({}));
  CHECK(perms.permissions.empty());
}

TEST_CASE("axml: duplicate declarations collapse to one entry") {
  testutil::AxmlWriter writer(true);
  PermissionSet perms = parse_axml(writer.manifest_with_permissions({kCallPhone, kCallPhone}));
  CHECK(perms.permissions.size() == 1);
}

TEST_CASE("axml: malformed documents are rejected") {
  testutil::AxmlWriter writer(false);
  Bytes good = writer.manifest_with_permissions({kCallPhone});

  SUBCASE("not binary xml at all") {
    Bytes junk = {0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08};
    CHECK_THROWS_AS(parse_axml(junk), MalformedAxml);
  }
  SUBCASE("truncated chunk") {
    Bytes cut(good.begin(), good.begin() + good.size() / 2);
    // keep root size honest so the inner chunk is what truncates
    cut[4] = static_cast<std::uint8_t>(cut.size() & 0xff);
    cut[5] = static_cast<std::uint8_t>((cut.size() >> 8) & 0xff);
    cut[6] = 0;
    cut[7] = 0;
    CHECK_THROWS_AS(parse_axml(cut), MalformedAxml);
  }
  SUBCASE("string index out of pool bounds") {
    // the permission string has pool index 4, referenced only by the
    // attribute's rawValue and typed data; push both beyond the pool
    Bytes bad = good;
    const std::size_t pool_size = static_cast<std::size_t>(bad[12]) | (bad[13] << 8) |
                                  (bad[14] << 16) | (static_cast<std::size_t>(bad[15]) << 24);
    const std::size_t elements_at = 8 + pool_size;
    int rewrote = 0;
    for (std::size_t i = elements_at; i + 4 <= bad.size(); ++i) {
      std::uint32_t v = static_cast<std::uint32_t>(bad[i]) | (bad[i + 1] << 8) |
                        (bad[i + 2] << 16) | (static_cast<std::uint32_t>(bad[i + 3]) << 24);
      if (v == 4) {
        bad[i] = 0x77;  // index 0x77 >> pool size
        ++rewrote;
      }
    }
    REQUIRE(rewrote == 2);
    CHECK_THROWS_AS(parse_axml(bad), MalformedAxml);
  }
}

TEST_CASE("manifest text: the CALL_PHONE snippet") {
  PermissionSet perms = parse_manifest_text(
      "<manifest xmlns:android=\"http://schemas.android.com/apk/res/android\"\n"
      "    package=\"com.android.app.callApp\">\n"
      "  <uses-permission android:name=\"android.permission.CALL_PHONE\" />\n"
      "</manifest>\n");
  CHECK(perms.permissions == std::set<std::string>{kCallPhone});
}

TEST_CASE("manifest text: empty manifest element") {
  PermissionSet perms = parse_manifest_text("<manifest package=\"a.b\"></manifest>");
  CHECK(perms.permissions.empty());
}

TEST_CASE("manifest text: comments, CDATA, doctype, entities, sdk-23 variant") {
  PermissionSet perms = parse_manifest_text(
      "<?xml version=\"1.0\"?>\n"
      "<!DOCTYPE manifest>\n"
      "<!-- <uses-permission android:name=\"android.permission.FAKE\"/> -->\n"
      "<manifest>\n"
      "  <![CDATA[ <uses-permission android:name=\"android.permission.FAKE2\"/> ]]>\n"
      "  <uses-permission-sdk-23 android:name=\"android.permission.CALL&#95;PHONE\"/>\n"
      "</manifest>\n");
  // &#95; is '_'
  CHECK(perms.permissions == std::set<std::string>{kCallPhone});
}

TEST_CASE("manifest text: malformed XML is rejected") {
  CHECK_THROWS_AS(parse_manifest_text("<manifest><uses-permission android:name="), MalformedXml);
  CHECK_THROWS_AS(parse_manifest_text("<manifest><!-- unterminated"), MalformedXml);
  CHECK_THROWS_AS(parse_manifest_text("<uses-permission android:name=\"unterminated></x>"),
                  MalformedXml);
}

TEST_CASE("manifest encodings agree and are order-independent") {
  std::vector<std::string> perms = {
      "android.permission.SEND_SMS",
      "android.permission.CAMERA",
      "com.vendor.custom.PERMISSION",
      "android.permission.READ_CALENDAR",
  };

  std::mt19937_64 rng(5);
  for (int round = 0; round < 6; ++round) {
    std::shuffle(perms.begin(), perms.end(), rng);

    testutil::AxmlWriter writer(round % 2 == 0);
    PermissionSet from_axml = parse_axml(writer.manifest_with_permissions(perms));

    PermissionSet wanted;
    for (const std::string& p : perms) wanted.add(p);
    PermissionSet from_text = parse_manifest_text(render_manifest_xml(wanted, "com.example"));

    CHECK(from_axml == from_text);
    CHECK(from_axml == wanted);
  }
}
