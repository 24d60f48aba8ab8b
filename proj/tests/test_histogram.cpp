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

#include "dexsieve/histogram.hpp"
#include "test_util.hpp"

using namespace dexsieve;

TEST_CASE("merge: empty list is the zero histogram") {
  OpcodeHistogram merged = merge_histograms({});
  CHECK(merged.total == 0);
  for (int j = 0; j < kOpcodeCount; ++j) CHECK(merged.counts[j] == 0);
}

TEST_CASE("merge: zero histogram is the additive identity") {
  std::mt19937_64 rng(1);
  OpcodeHistogram h = testutil::random_histogram(rng);
  std::vector<OpcodeHistogram> parts = {h, OpcodeHistogram{}};
  CHECK(merge_histograms(parts) == h);
}

TEST_CASE("merge: bucketwise sums match an arithmetic oracle") {
  std::mt19937_64 rng(2);
  OpcodeHistogram a = testutil::random_histogram(rng);
  OpcodeHistogram b = testutil::random_histogram(rng);
  std::vector<OpcodeHistogram> parts = {a, b};
  OpcodeHistogram merged = merge_histograms(parts);
  std::uint64_t total = 0;
  for (int j = 0; j < kOpcodeCount; ++j) {
    CHECK(merged.counts[j] == a.counts[j] + b.counts[j]);
    total += a.counts[j] + b.counts[j];
  }
  CHECK(merged.total == total);
}

TEST_CASE("merge: associative and commutative on random histograms") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    OpcodeHistogram a = testutil::random_histogram(rng);
    OpcodeHistogram b = testutil::random_histogram(rng);
    OpcodeHistogram c = testutil::random_histogram(rng);

    std::vector<OpcodeHistogram> abc = {a, b, c};
    std::vector<OpcodeHistogram> cba = {c, b, a};
    CHECK(merge_histograms(abc) == merge_histograms(cba));

    std::vector<OpcodeHistogram> ab = {a, b};
    std::vector<OpcodeHistogram> left = {merge_histograms(ab), c};
    std::vector<OpcodeHistogram> bc = {b, c};
    std::vector<OpcodeHistogram> right = {a, merge_histograms(bc)};
    CHECK(merge_histograms(left) == merge_histograms(right));
  }
}

TEST_CASE("histogram record round-trips") {
  std::mt19937_64 rng(4);
  OpcodeHistogram h = testutil::random_histogram(rng);
  std::string line = histogram_record("app. with spaces_01", h);
  auto [id, parsed] = parse_histogram_record(line);
  CHECK(id == "app. with spaces_01");
  CHECK(parsed == h);
}

TEST_CASE("histogram record validates field count and total") {
  CHECK_THROWS_AS(parse_histogram_record("app,1,2,3"), IoError);

  OpcodeHistogram h;
  h.bump(0x0e);
  std::string line = histogram_record("x", h);
  line.back() = '9';  // corrupt the total
  CHECK_THROWS_AS(parse_histogram_record(line), IoError);
}
