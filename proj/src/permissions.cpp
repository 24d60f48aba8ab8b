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

#include "dexsieve/permissions.hpp"

#include <sstream>

#include "dexsieve/common.hpp"
#include "dexsieve/io_util.hpp"

namespace dexsieve {

namespace {

constexpr std::string_view kGroupNames[] = {
    "Calendar", "Camera", "Contacts", "Location", "Microphone",
    "Phone",    "Sensors", "SMS",     "Storage",  "Others",
};

struct MappingRow {
  const char* permission;
  GroupId group;
};

// The dangerous-permission groups. One permission, one group.
const MappingRow kDefaultMapping[] = {
    {"android.permission.READ_CALENDAR", GroupId::kCalendar},
    {"android.permission.WRITE_CALENDAR", GroupId::kCalendar},
    {"android.permission.CAMERA", GroupId::kCamera},
    {"android.permission.READ_CONTACTS", GroupId::kContacts},
    {"android.permission.WRITE_CONTACTS", GroupId::kContacts},
    {"android.permission.GET_ACCOUNTS", GroupId::kContacts},
    {"android.permission.ACCESS_FINE_LOCATION", GroupId::kLocation},
    {"android.permission.ACCESS_COARSE_LOCATION", GroupId::kLocation},
    {"android.permission.RECORD_AUDIO", GroupId::kMicrophone},
    {"android.permission.READ_PHONE_STATE", GroupId::kPhone},
    {"android.permission.READ_PHONE_NUMBERS", GroupId::kPhone},
    {"android.permission.CALL_PHONE", GroupId::kPhone},
    {"android.permission.ANSWER_PHONE_CALLS", GroupId::kPhone},
    {"android.permission.READ_CALL_LOG", GroupId::kPhone},
    {"android.permission.WRITE_CALL_LOG", GroupId::kPhone},
    {"android.permission.ADD_VOICEMAIL", GroupId::kPhone},
    {"android.permission.USE_SIP", GroupId::kPhone},
    {"android.permission.PROCESS_OUTGOING_CALLS", GroupId::kPhone},
    {"android.permission.BODY_SENSORS", GroupId::kSensors},
    {"android.permission.SEND_SMS", GroupId::kSms},
    {"android.permission.RECEIVE_SMS", GroupId::kSms},
    {"android.permission.READ_SMS", GroupId::kSms},
    {"android.permission.RECEIVE_WAP_PUSH", GroupId::kSms},
    {"android.permission.RECEIVE_MMS", GroupId::kSms},
    {"android.permission.READ_EXTERNAL_STORAGE", GroupId::kStorage},
    {"android.permission.WRITE_EXTERNAL_STORAGE", GroupId::kStorage},
};

}  // namespace

void PermissionSet::add(std::string_view raw) {
  std::string p = trim(std::string(raw));
  if (!p.empty()) permissions.insert(std::move(p));
}

std::string_view group_name(GroupId g) { return kGroupNames[static_cast<std::size_t>(g)]; }

std::optional<GroupId> group_from_name(std::string_view name) {
  for (GroupId g : kAllGroups) {
    if (group_name(g) == name) return g;
  }
  return std::nullopt;
}

const PermissionGroupMap& PermissionGroupMap::builtin() {
  static const PermissionGroupMap map = [] {
    PermissionGroupMap m;
    for (const MappingRow& row : kDefaultMapping) m.mapping_.emplace(row.permission, row.group);
    return m;
  }();
  return map;
}

PermissionGroupMap PermissionGroupMap::load(const std::filesystem::path& path) {
  PermissionGroupMap map;
  std::istringstream in(read_file_text(path));
  std::string line;
  std::optional<GroupId> current;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      std::string name = trim(t.substr(1, t.size() - 2));
      current = group_from_name(name);
      if (!current) {
        throw InvalidSpec(path.string() + ":" + std::to_string(line_no) + ": unknown group '" +
                          name + "'");
      }
      if (*current == GroupId::kOthers) {
        throw InvalidSpec(path.string() + ":" + std::to_string(line_no) +
                          ": Others holds no permissions of its own");
      }
      continue;
    }
    if (!current) {
      throw InvalidSpec(path.string() + ":" + std::to_string(line_no) +
                        ": permission before any [Group] heading");
    }
    auto [it, inserted] = map.mapping_.emplace(t, *current);
    if (!inserted) {
      throw InvalidSpec(path.string() + ":" + std::to_string(line_no) + ": permission '" + t +
                        "' listed twice");
    }
  }
  if (map.mapping_.empty()) throw InvalidSpec(path.string() + ": empty permission group map");
  return map;
}

std::optional<GroupId> PermissionGroupMap::group_of(std::string_view permission) const {
  auto it = mapping_.find(std::string(permission));
  if (it == mapping_.end()) return std::nullopt;
  return it->second;
}

std::string PermissionGroupMap::serialize() const {
  std::string out = "# dexsieve permission groups v1\n";
  for (GroupId g : kAllGroups) {
    if (g == GroupId::kOthers) continue;
    out += "[";
    out += group_name(g);
    out += "]\n";
    for (const auto& [perm, grp] : mapping_) {
      if (grp == g) {
        out += perm;
        out += '\n';
      }
    }
  }
  return out;
}

std::set<GroupId> assign_groups(const PermissionSet& perms, const PermissionGroupMap& map,
                                const GroupingOptions& opts) {
  std::set<GroupId> groups;
  for (const std::string& p : perms.permissions) {
    if (auto g = map.group_of(p)) {
      if (*g == GroupId::kSensors && !opts.include_sensors) continue;
      groups.insert(*g);
    }
  }
  if (groups.empty()) groups.insert(GroupId::kOthers);
  return groups;
}

std::map<GroupId, std::vector<std::string>> partition_corpus(
    const std::vector<GroupAssignment>& assignments) {
  std::set<std::string> seen;
  std::map<GroupId, std::vector<std::string>> buckets;
  for (const GroupAssignment& a : assignments) {
    if (!seen.insert(a.app_id).second) {
      throw DuplicateAppId("duplicate app id '" + a.app_id + "'");
    }
    for (GroupId g : a.groups) buckets[g].push_back(a.app_id);
  }
  return buckets;
}

}  // namespace dexsieve
