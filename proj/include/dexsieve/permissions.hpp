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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dexsieve {

// Requested permissions of one app: trimmed, case-preserved, fully
// qualified, duplicates collapsed.
struct PermissionSet {
  std::set<std::string> permissions;

  void add(std::string_view raw);
  bool contains(std::string_view p) const { return permissions.count(std::string(p)) > 0; }
  bool operator==(const PermissionSet&) const = default;
};

// The nine analysis groups plus Sensors, which stays defined but is excluded
// from default pipelines because reference malware corpora lack body-sensor
// apps.
enum class GroupId : std::uint8_t {
  kCalendar,
  kCamera,
  kContacts,
  kLocation,
  kMicrophone,
  kPhone,
  kSensors,
  kSms,
  kStorage,
  kOthers,
};

inline constexpr std::array<GroupId, 10> kAllGroups = {
    GroupId::kCalendar, GroupId::kCamera,  GroupId::kContacts, GroupId::kLocation,
    GroupId::kMicrophone, GroupId::kPhone, GroupId::kSensors,  GroupId::kSms,
    GroupId::kStorage,  GroupId::kOthers,
};

std::string_view group_name(GroupId g);
std::optional<GroupId> group_from_name(std::string_view name);

// Dangerous-permission -> group mapping. The default table is the built-in
// platform list (26 permissions across eight dangerous groups plus Sensors);
// an alternative mapping can be loaded from the human-readable data file so
// the table stays auditable.
class PermissionGroupMap {
 public:
  static const PermissionGroupMap& builtin();
  static PermissionGroupMap load(const std::filesystem::path& path);

  // Group of a dangerous permission, or nullopt for anything unmapped.
  std::optional<GroupId> group_of(std::string_view permission) const;

  std::size_t size() const { return mapping_.size(); }
  const std::map<std::string, GroupId>& entries() const { return mapping_; }

  std::string serialize() const;

 private:
  std::map<std::string, GroupId> mapping_;
};

struct GroupingOptions {
  bool include_sensors = false;
};

// Every dangerous group whose permission list intersects perms; {Others}
// when none does. Sensors appears only when opted in.
std::set<GroupId> assign_groups(const PermissionSet& perms,
                                const PermissionGroupMap& map = PermissionGroupMap::builtin(),
                                const GroupingOptions& opts = {});

struct GroupAssignment {
  std::string app_id;
  std::set<GroupId> groups;  // never empty
};

// Buckets app ids by group, preserving input order within each bucket.
// Throws DuplicateAppId when an app id repeats.
std::map<GroupId, std::vector<std::string>> partition_corpus(
    const std::vector<GroupAssignment>& assignments);

}  // namespace dexsieve
