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
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "dexsieve/feature_select.hpp"
#include "test_util.hpp"

using namespace dexsieve;

namespace {

// Independent selection oracle: plain loops, no shared code with the
// implementation path it checks.
struct OracleResult {
  double benign_mean[kOpcodeCount];
  double malicious_mean[kOpcodeCount];
  double score[kOpcodeCount];
  int order[kOpcodeCount];
};

OracleResult brute_force_selection(const std::vector<OpcodeHistogram>& benign,
                                   const std::vector<OpcodeHistogram>& malicious) {
  OracleResult r{};
  for (int j = 0; j < kOpcodeCount; ++j) {
    std::uint64_t sum = 0;
    for (const auto& h : benign) sum += h.counts[j];
    r.benign_mean[j] = double(sum) / double(benign.size());
    sum = 0;
    for (const auto& h : malicious) sum += h.counts[j];
    r.malicious_mean[j] = double(sum) / double(malicious.size());
    double d = r.benign_mean[j] - r.malicious_mean[j];
    r.score[j] = d < 0 ? -d : d;
  }
  for (int j = 0; j < kOpcodeCount; ++j) r.order[j] = j;
  std::stable_sort(r.order, r.order + kOpcodeCount,
                   [&](int a, int b) { return r.score[a] > r.score[b]; });
  return r;
}

}  // namespace

TEST_CASE("compute_profile: arithmetic means per bucket") {
  OpcodeHistogram a, b;
  a.counts[5] = 4;
  a.total = 4;
  b.counts[5] = 6;
  b.total = 6;
  std::vector<OpcodeHistogram> benign = {a, b};
  std::vector<OpcodeHistogram> malicious = {a};

  ClassMeanProfile p = compute_profile(benign, malicious);
  CHECK(p.f_benign[5] == 5.0);
  CHECK(p.f_malicious[5] == 4.0);
  CHECK(p.n_benign == 2);
  CHECK(p.n_malicious == 1);
}

TEST_CASE("compute_profile: identical single app on both sides") {
  std::mt19937_64 rng(31);
  OpcodeHistogram h = testutil::random_histogram(rng);
  std::vector<OpcodeHistogram> one = {h};
  ClassMeanProfile p = compute_profile(one, one);
  CHECK(p.f_benign == p.f_malicious);
}

TEST_CASE("compute_profile: empty class errors") {
  std::vector<OpcodeHistogram> one(1), none;
  CHECK_THROWS_AS(compute_profile(none, one), EmptyClass);
  CHECK_THROWS_AS(compute_profile(one, none), EmptyClass);
}

TEST_CASE("compute_profile: permutation invariance within a class") {
  std::mt19937_64 rng(37);
  std::vector<OpcodeHistogram> benign, malicious;
  for (int i = 0; i < 12; ++i) benign.push_back(testutil::random_histogram(rng));
  for (int i = 0; i < 9; ++i) malicious.push_back(testutil::random_histogram(rng));

  ClassMeanProfile before = compute_profile(benign, malicious);
  std::shuffle(benign.begin(), benign.end(), rng);
  std::shuffle(malicious.begin(), malicious.end(), rng);
  ClassMeanProfile after = compute_profile(benign, malicious);
  CHECK(before == after);  // integer sums make this exact
}

TEST_CASE("rank_features: equal profiles give zero scores and identity order") {
  std::vector<OpcodeHistogram> one(1);
  one[0].counts[9] = 3;
  one[0].total = 3;
  ClassMeanProfile p = compute_profile(one, one);
  FeatureRanking r = rank_features(p);
  for (int j = 0; j < kOpcodeCount; ++j) {
    CHECK(r.scores[j] == 0.0);
    CHECK(r.order[j] == j);  // tie-break: ascending opcode index
  }
}

TEST_CASE("rank_features: single differing opcode wins") {
  OpcodeHistogram ben, mal;
  ben.counts[0x1a] = 10;
  ben.total = 10;
  mal.counts[0x1a] = 50;
  mal.total = 50;
  std::vector<OpcodeHistogram> b = {ben}, m = {mal};
  FeatureRanking r = rank_features(compute_profile(b, m));
  CHECK(r.order[0] == 0x1a);
  CHECK(r.scores[0x1a] == 40.0);
  CHECK(top_n(r, 1) == std::vector<std::uint8_t>{0x1a});
}

TEST_CASE("top_n: bounds and the full permutation") {
  std::vector<OpcodeHistogram> one(1);
  FeatureRanking r = rank_features(compute_profile(one, one));
  CHECK_THROWS_AS(top_n(r, 0), NOutOfRange);
  CHECK_THROWS_AS(top_n(r, 257), NOutOfRange);
  auto all = top_n(r, 256);
  CHECK(all.size() == 256);
  std::set<std::uint8_t> unique(all.begin(), all.end());
  CHECK(unique.size() == 256);
}

TEST_CASE("difference_report: shape and monotone scores") {
  std::mt19937_64 rng(41);
  std::vector<OpcodeHistogram> benign, malicious;
  for (int i = 0; i < 5; ++i) benign.push_back(testutil::random_histogram(rng));
  for (int i = 0; i < 5; ++i) malicious.push_back(testutil::random_histogram(rng));
  FeatureRanking r = rank_features(compute_profile(benign, malicious));

  std::string report = difference_report(r, 50);
  std::istringstream in(report);
  std::string line;
  double prev = std::numeric_limits<double>::infinity();
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    double score = std::stod(line.substr(tab + 1));
    CHECK(score <= prev);
    prev = score;
    ++rows;
  }
  CHECK(rows == 50);

  std::string single = difference_report(r, 1);
  CHECK_THROWS_AS(difference_report(r, 0), NOutOfRange);

  // all-zero profile: 256 rows of zero
  std::vector<OpcodeHistogram> zero(2);
  FeatureRanking rz = rank_features(compute_profile(zero, zero));
  std::string zreport = difference_report(rz, 256);
  int zero_rows = 0;
  std::istringstream zin(zreport);
  while (std::getline(zin, line)) {
    if (line.empty() || line[0] == '#') continue;
    CHECK(line.substr(line.find('\t') + 1) == "0.000000");
    ++zero_rows;
  }
  CHECK(zero_rows == 256);
}

TEST_CASE("scale property: scaling every histogram scales scores, keeps order") {
  std::mt19937_64 rng(43);
  std::vector<OpcodeHistogram> benign, malicious;
  for (int i = 0; i < 8; ++i) benign.push_back(testutil::random_histogram(rng, 20));
  for (int i = 0; i < 6; ++i) malicious.push_back(testutil::random_histogram(rng, 20));
  FeatureRanking base = rank_features(compute_profile(benign, malicious));

  const std::uint64_t c = 7;
  auto scale = [&](std::vector<OpcodeHistogram> hs) {
    for (auto& h : hs) {
      for (auto& v : h.counts) v *= c;
      h.total *= c;
    }
    return hs;
  };
  FeatureRanking scaled = rank_features(compute_profile(scale(benign), scale(malicious)));

  CHECK(scaled.order == base.order);
  for (int j = 0; j < kOpcodeCount; ++j) {
    CHECK(scaled.scores[j] == doctest::Approx(base.scores[j] * c).epsilon(1e-12));
  }
}

TEST_CASE("oracle equivalence on random small corpora") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 40; ++round) {
    std::vector<OpcodeHistogram> benign, malicious;
    const int nb = 1 + int(rng() % 15);
    const int nm = 1 + int(rng() % 15);
    for (int i = 0; i < nb; ++i) benign.push_back(testutil::random_histogram(rng));
    for (int i = 0; i < nm; ++i) malicious.push_back(testutil::random_histogram(rng));

    ClassMeanProfile p = compute_profile(benign, malicious);
    FeatureRanking r = rank_features(p);
    OracleResult oracle = brute_force_selection(benign, malicious);

    for (int j = 0; j < kOpcodeCount; ++j) {
      CHECK(p.f_benign[j] == oracle.benign_mean[j]);
      CHECK(p.f_malicious[j] == oracle.malicious_mean[j]);
      CHECK(r.scores[j] == oracle.score[j]);
    }
    for (int k = 0; k < kOpcodeCount; ++k) CHECK(int(r.order[k]) == oracle.order[k]);
  }
}

TEST_CASE("relative-frequency mode matches a direct oracle within 1e-12") {
  std::mt19937_64 rng(53);
  std::vector<OpcodeHistogram> benign, malicious;
  for (int i = 0; i < 7; ++i) benign.push_back(testutil::random_histogram(rng));
  for (int i = 0; i < 5; ++i) malicious.push_back(testutil::random_histogram(rng));
  benign.push_back(OpcodeHistogram{});  // empty app contributes zero

  ClassMeanProfile p = compute_profile(benign, malicious, FrequencyMode::kRelative);

  for (int j = 0; j < kOpcodeCount; ++j) {
    double sum = 0.0;
    for (const auto& h : benign) {
      if (h.total > 0) sum += double(h.counts[j]) * (1.0 / double(h.total));
    }
    double expected = sum / double(benign.size());
    CHECK(p.f_benign[j] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("feature list artifact round-trips") {
  std::mt19937_64 rng(59);
  std::vector<OpcodeHistogram> benign, malicious;
  for (int i = 0; i < 4; ++i) benign.push_back(testutil::random_histogram(rng));
  for (int i = 0; i < 4; ++i) malicious.push_back(testutil::random_histogram(rng));
  FeatureRanking r = rank_features(compute_profile(benign, malicious));

  std::string text = serialize_feature_list("SMS", r, 40);
  FeatureListFile parsed = parse_feature_list(text);
  CHECK(parsed.group == "SMS");
  REQUIRE(parsed.opcodes.size() == 40);
  for (int i = 0; i < 40; ++i) CHECK(parsed.opcodes[i] == r.order[i]);

  CHECK_THROWS_AS(parse_feature_list("garbage"), IoError);
}
