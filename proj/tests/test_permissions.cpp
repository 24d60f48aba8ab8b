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

#include "dexsieve/io_util.hpp"
#include "dexsieve/permissions.hpp"
#include "test_util.hpp"

using namespace dexsieve;

namespace {

PermissionSet make_set(std::initializer_list<const char*> perms) {
  PermissionSet s;
  for (const char* p : perms) s.add(p);
  return s;
}

}  // namespace

TEST_CASE("permission set normalizes entries") {
  PermissionSet s;
  s.add("  android.permission.CAMERA \t");
  s.add("android.permission.CAMERA");
  s.add("");
  s.add("   ");
  CHECK(s.permissions == std::set<std::string>{"android.permission.CAMERA"});
}

TEST_CASE("builtin mapping: 26 dangerous permissions, each in exactly one group") {
  const PermissionGroupMap& map = PermissionGroupMap::builtin();
  CHECK(map.size() == 26);

  std::map<GroupId, int> per_group;
  for (const auto& [perm, group] : map.entries()) {
    CHECK(perm.rfind("android.permission.", 0) == 0);
    per_group[group]++;
  }
  CHECK(per_group[GroupId::kCalendar] == 2);
  CHECK(per_group[GroupId::kCamera] == 1);
  CHECK(per_group[GroupId::kContacts] == 3);
  CHECK(per_group[GroupId::kLocation] == 2);
  CHECK(per_group[GroupId::kMicrophone] == 1);
  CHECK(per_group[GroupId::kPhone] == 9);
  CHECK(per_group[GroupId::kSensors] == 1);
  CHECK(per_group[GroupId::kSms] == 5);
  CHECK(per_group[GroupId::kStorage] == 2);
  CHECK(per_group.count(GroupId::kOthers) == 0);
}

TEST_CASE("assign_groups: single rows of the mapping") {
  CHECK(assign_groups(make_set({"android.permission.READ_CALENDAR"})) ==
        std::set<GroupId>{GroupId::kCalendar});
  CHECK(assign_groups(make_set({"android.permission.GET_ACCOUNTS"})) ==
        std::set<GroupId>{GroupId::kContacts});
  CHECK(assign_groups(make_set({"android.permission.RECORD_AUDIO"})) ==
        std::set<GroupId>{GroupId::kMicrophone});
}

TEST_CASE("assign_groups: empty and unknown sets fall into Others") {
  CHECK(assign_groups(PermissionSet{}) == std::set<GroupId>{GroupId::kOthers});
  CHECK(assign_groups(make_set({"android.permission.INTERNET", "com.vendor.FOO"})) ==
        std::set<GroupId>{GroupId::kOthers});
}

TEST_CASE("assign_groups: multi-group membership") {
  auto groups = assign_groups(make_set({"android.permission.SEND_SMS",
                                        "android.permission.READ_EXTERNAL_STORAGE",
                                        "android.permission.CALL_PHONE"}));
  CHECK(groups == std::set<GroupId>{GroupId::kSms, GroupId::kStorage, GroupId::kPhone});
}

TEST_CASE("assign_groups: Others never rides along with a dangerous group") {
  auto groups = assign_groups(make_set({"android.permission.CAMERA", "com.vendor.FOO"}));
  CHECK(groups == std::set<GroupId>{GroupId::kCamera});
}

TEST_CASE("assign_groups: Sensors only with the flag") {
  auto sensors_only = make_set({"android.permission.BODY_SENSORS"});
  CHECK(assign_groups(sensors_only) == std::set<GroupId>{GroupId::kOthers});

  GroupingOptions opts;
  opts.include_sensors = true;
  CHECK(assign_groups(sensors_only, PermissionGroupMap::builtin(), opts) ==
        std::set<GroupId>{GroupId::kSensors});
}

TEST_CASE("assign_groups: monotone under adding permissions") {
  std::mt19937_64 rng(17);
  std::vector<std::string> universe;
  for (const auto& [perm, group] : PermissionGroupMap::builtin().entries()) universe.push_back(perm);
  universe.push_back("android.permission.INTERNET");
  universe.push_back("com.vendor.custom.THING");

  for (int round = 0; round < 100; ++round) {
    PermissionSet s;
    for (const std::string& p : universe) {
      if (rng() % 3 == 0) s.add(p);
    }
    auto before = assign_groups(s);
    PermissionSet bigger = s;
    bigger.add(universe[rng() % universe.size()]);
    auto after = assign_groups(bigger);

    for (GroupId g : before) {
      if (g == GroupId::kOthers) continue;  // Others can be displaced
      CHECK(after.count(g) == 1);
    }
  }
}

TEST_CASE("partition_corpus: multi-membership, coverage, order, duplicates") {
  std::vector<GroupAssignment> assignments = {
      {"app1", {GroupId::kSms, GroupId::kPhone}},
      {"app2", {GroupId::kOthers}},
      {"app3", {GroupId::kSms}},
  };
  auto buckets = partition_corpus(assignments);
  CHECK(buckets[GroupId::kSms] == std::vector<std::string>{"app1", "app3"});
  CHECK(buckets[GroupId::kPhone] == std::vector<std::string>{"app1"});
  CHECK(buckets[GroupId::kOthers] == std::vector<std::string>{"app2"});

  // coverage: every app appears somewhere
  std::set<std::string> seen;
  for (const auto& [g, ids] : buckets) {
    for (const auto& id : ids) seen.insert(id);
  }
  CHECK(seen == std::set<std::string>{"app1", "app2", "app3"});

  assignments.push_back({"app1", {GroupId::kCamera}});
  CHECK_THROWS_AS(partition_corpus(assignments), DuplicateAppId);

  CHECK(partition_corpus({}).empty());
}

TEST_CASE("partition_corpus: bucket sizes match a brute-force recount") {
  std::mt19937_64 rng(23);
  std::vector<std::string> universe;
  for (const auto& [perm, group] : PermissionGroupMap::builtin().entries()) universe.push_back(perm);

  std::vector<GroupAssignment> assignments;
  std::map<GroupId, std::size_t> expected;
  for (int i = 0; i < 100; ++i) {
    PermissionSet s;
    for (const std::string& p : universe) {
      if (rng() % 6 == 0) s.add(p);
    }
    GroupAssignment a;
    a.app_id = "app" + std::to_string(i);
    a.groups = assign_groups(s);
    CHECK(!a.groups.empty());
    for (GroupId g : a.groups) expected[g]++;
    assignments.push_back(std::move(a));
  }
  auto buckets = partition_corpus(assignments);
  for (const auto& [g, count] : expected) CHECK(buckets[g].size() == count);
  std::size_t bucket_total = 0, expected_total = 0;
  for (const auto& [g, ids] : buckets) bucket_total += ids.size();
  for (const auto& [g, c] : expected) expected_total += c;
  CHECK(bucket_total == expected_total);
}

TEST_CASE("mapping file: round-trips and validates") {
  testutil::TempDir tmp("mapping");
  const auto path = tmp.path() / "groups.txt";

  atomic_write_file(path, PermissionGroupMap::builtin().serialize());
  PermissionGroupMap loaded = PermissionGroupMap::load(path);
  CHECK(loaded.entries() == PermissionGroupMap::builtin().entries());

  atomic_write_file(path, "[NoSuchGroup]\nandroid.permission.CAMERA\n");
  CHECK_THROWS_AS(PermissionGroupMap::load(path), InvalidSpec);

  atomic_write_file(path, "android.permission.CAMERA\n");
  CHECK_THROWS_AS(PermissionGroupMap::load(path), InvalidSpec);

  atomic_write_file(path, "[Camera]\nandroid.permission.CAMERA\n[Phone]\nandroid.permission.CAMERA\n");
  CHECK_THROWS_AS(PermissionGroupMap::load(path), InvalidSpec);
}

TEST_CASE("group names round-trip") {
  for (GroupId g : kAllGroups) {
    CHECK(group_from_name(group_name(g)) == g);
  }
  CHECK(!group_from_name("NotAGroup").has_value());
}
