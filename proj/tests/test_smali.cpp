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

#include <random>

#include "dexsieve/dex_builder.hpp"
#include "dexsieve/dex_parser.hpp"
#include "dexsieve/smali_parser.hpp"
#include "dexsieve/synthetic.hpp"
#include "test_util.hpp"

using namespace dexsieve;

namespace {

OpcodeHistogram parse_one(const std::string& text, const SmaliOptions& opts = {}) {
  std::vector<SmaliDocument> docs{{"test.smali", text}};
  return extract_from_smali(docs, opts);
}

}  // namespace

TEST_CASE("smali: const/4 and return inside a method are counted") {
  OpcodeHistogram h = parse_one(
      ".class public LFoo;\n"
      ".method public static a()I\n"
      "    .registers 1\n"
      "    const/4 v0, 0x0\n"
      "    return v0\n"
      ".end method\n");
  CHECK(h.counts[0x12] == 1);
  CHECK(h.counts[0x0f] == 1);
  CHECK(h.total == 2);
}

TEST_CASE("smali: directives, labels, comments, and blanks contribute nothing") {
  OpcodeHistogram h = parse_one(
      "# full line comment\n"
      ".class public LFoo;\n"
      ".super Ljava/lang/Object;\n"
      ".field private x:I\n"
      "\n"
      ".method public static a()V\n"
      "    .registers 2\n"
      "    .line 10\n"
      "    :label_0\n"
      "    # comment inside method\n"
      ".end method\n");
  CHECK(h.total == 0);
}

TEST_CASE("smali: instructions outside .method blocks are not counted") {
  // field initializer text or stray lines outside methods never count
  OpcodeHistogram h = parse_one("const/4 v0, 0x0\n");
  CHECK(h.total == 0);
}

TEST_CASE("smali: trailing comments and '#' inside strings") {
  OpcodeHistogram h = parse_one(
      ".method public static a()V\n"
      "    const-string v0, \"x # not a comment\"  # real comment\n"
      "    return-void\n"
      ".end method\n");
  CHECK(h.counts[0x1a] == 1);
  CHECK(h.counts[0x0e] == 1);
  CHECK(h.total == 2);
}

TEST_CASE("smali: payload directive blocks are skipped, including data lines") {
  OpcodeHistogram h = parse_one(
      ".method public static a()V\n"
      "    packed-switch v0, :ps\n"
      "    sparse-switch v0, :ss\n"
      "    fill-array-data v0, :fad\n"
      "    :ps\n"
      "    .packed-switch 0x0\n"
      "        :case_0\n"
      "    .end packed-switch\n"
      "    :ss\n"
      "    .sparse-switch\n"
      "        0x1 -> :case_0\n"
      "    .end sparse-switch\n"
      "    :fad\n"
      "    .array-data 4\n"
      "        0x12345678\n"
      "        0x9abcdef0\n"
      "    .end array-data\n"
      "    :case_0\n"
      "    return-void\n"
      ".end method\n");
  CHECK(h.counts[0x2b] == 1);
  CHECK(h.counts[0x2c] == 1);
  CHECK(h.counts[0x26] == 1);
  CHECK(h.counts[0x0e] == 1);
  CHECK(h.total == 4);
}

TEST_CASE("smali: annotation blocks inside methods are skipped") {
  OpcodeHistogram h = parse_one(
      ".method public static a()V\n"
      "    .annotation system Ldalvik/annotation/Throws;\n"
      "        value = {\n"
      "            Ljava/lang/Exception;\n"
      "        }\n"
      "    .end annotation\n"
      "    return-void\n"
      ".end method\n");
  CHECK(h.counts[0x0e] == 1);
  CHECK(h.total == 1);
}

TEST_CASE("smali: unknown mnemonic fails with location, or warns when configured") {
  const std::string doc =
      ".method public static a()V\n"
      "    frobnicate v0\n"
      "    return-void\n"
      ".end method\n";

  CHECK_THROWS_AS(parse_one(doc), UnknownMnemonic);
  try {
    parse_one(doc);
  } catch (const UnknownMnemonic& e) {
    std::string msg = e.what();
    CHECK(msg.find("test.smali:2") != std::string::npos);
    CHECK(msg.find("frobnicate") != std::string::npos);
  }

  SmaliOptions warn;
  warn.on_unknown = SmaliOptions::OnUnknown::kWarnSkip;
  std::vector<SmaliDocument> docs{{"test.smali", doc}};
  std::vector<SmaliWarning> warnings;
  OpcodeHistogram h = extract_from_smali(docs, warn, &warnings);
  CHECK(h.counts[0x0e] == 1);
  CHECK(h.total == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].line == 2);
  CHECK(warnings[0].token == "frobnicate");
}

TEST_CASE("smali: multiple documents accumulate into one histogram") {
  std::vector<SmaliDocument> docs{
      {"a.smali", ".method a()V\n    nop\n.end method\n"},
      {"b.smali", ".method b()V\n    nop\n    return-void\n.end method\n"},
  };
  OpcodeHistogram h = extract_from_smali(docs);
  CHECK(h.counts[0x00] == 2);
  CHECK(h.counts[0x0e] == 1);
}

TEST_CASE("smali/dex agreement: one program dual-encoded by hand") {
  // the same logical instruction sequence, written both ways by hand
  const std::string smali =
      ".method public static a()V\n"
      "    const/4 v0, 0x0\n"
      "    const-string v1, \"s\"\n"
      "    invoke-virtual {v0}, LFoo;->m()V\n"
      "    return-void\n"
      ".end method\n";
  OpcodeHistogram from_smali = parse_one(smali);

  // const/4(1) const-string(2) invoke-virtual(3) return-void(1)
  Bytes dex = testutil::hand_dex({0x0012, 0x001a, 0x0000, 0x006e, 0x0000, 0x0000, 0x000e});
  OpcodeHistogram from_dex = extract_from_dex(dex);

  CHECK(from_smali == from_dex);
  CHECK(from_smali.total == 4);
}

TEST_CASE("smali/dex agreement: random sequences through both emitters") {
  std::mt19937_64 rng(11);
  std::vector<std::uint8_t> assigned;
  for (int op = 0; op < kOpcodeCount; ++op) {
    if (opcode_info(static_cast<std::uint8_t>(op)).width > 0) {
      assigned.push_back(static_cast<std::uint8_t>(op));
    }
  }

  for (int round = 0; round < 10; ++round) {
    std::array<std::uint64_t, kOpcodeCount> counts{};
    for (int k = 0; k < 200; ++k) ++counts[assigned[rng() % assigned.size()]];

    OpcodeHistogram from_smali =
        parse_one(render_smali_for_counts(counts, "com/example/R" + std::to_string(round)));

    std::vector<std::uint8_t> seq;
    for (int op = 0; op < kOpcodeCount; ++op) {
      for (std::uint64_t c = 0; c < counts[op]; ++c) seq.push_back(static_cast<std::uint8_t>(op));
    }
    std::vector<std::uint8_t> encoded;
    Bytes dex = build_minimal_dex_from_opcodes(seq, &encoded);
    OpcodeHistogram from_dex = extract_from_dex(dex);

    // the dex side may carry one alignment nop; compare through the encoded
    // ground truth on both sides
    OpcodeHistogram expected_dex;
    for (std::uint8_t op : encoded) expected_dex.bump(op);
    CHECK(from_dex == expected_dex);

    OpcodeHistogram expected_smali;
    for (int op = 0; op < kOpcodeCount; ++op) {
      expected_smali.counts[op] = counts[op];
      expected_smali.total += counts[op];
    }
    CHECK(from_smali == expected_smali);

    // and when no alignment nop was needed the two encodings agree exactly
    if (encoded.size() == seq.size()) CHECK(from_dex == from_smali);
  }
}
