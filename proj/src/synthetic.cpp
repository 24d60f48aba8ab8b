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

#include "dexsieve/synthetic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dexsieve/dex_builder.hpp"
#include "dexsieve/io_util.hpp"
#include "dexsieve/rng.hpp"

namespace dexsieve {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Operand text per instruction format; enough to look like disassembly. The
// histogram parsers key on the leading mnemonic only.
std::string operand_text(std::uint8_t op) {
  switch (opcode_info(op).format) {
    case InsnFormat::k10x: return "";
    case InsnFormat::k12x: return " v0, v1";
    case InsnFormat::k11n: return " v0, 0x3";
    case InsnFormat::k11x: return " v0";
    case InsnFormat::k10t:
    case InsnFormat::k20t:
    case InsnFormat::k30t: return " :L0";
    case InsnFormat::k22x: return " v0, v9";
    case InsnFormat::k21t: return " v0, :L0";
    case InsnFormat::k21s: return " v0, 0x7b";
    case InsnFormat::k21h: return op == 0x19 ? " v0, 0x7fde000000000000L" : " v0, 0x10000";
    case InsnFormat::k21c:
      if (op == 0x1a) return " v0, \"synthetic\"";                       // const-string
      if (op == 0xff) return " v0, (I)V";                                // const-method-type
      if (op >= 0x60 && op <= 0x6d) return " v0, Lcom/example/C;->f:I";  // sget/sput family
      return " v0, Ljava/lang/Object;";
    case InsnFormat::k23x: return " v0, v1, v2";
    case InsnFormat::k22b: return " v0, v1, 0x7";
    case InsnFormat::k22t: return " v0, v1, :L0";
    case InsnFormat::k22s: return " v0, v1, 0x7b";
    case InsnFormat::k22c:
      if (op == 0x20) return " v0, v1, Ljava/lang/String;";  // instance-of
      if (op == 0x23) return " v0, v1, [I";                  // new-array
      return " v0, v1, Lcom/example/C;->f:I";
    case InsnFormat::k32x: return " v0, v1";
    case InsnFormat::k31i: return " v0, 0x12345678";
    case InsnFormat::k31t:
      if (op == kOpPackedSwitch) return " v0, :ps_data";
      if (op == kOpSparseSwitch) return " v0, :ss_data";
      return " v0, :fad_data";
    case InsnFormat::k31c: return " v0, \"synthetic\"";
    case InsnFormat::k35c:
      if (op == 0x24) return " {v0, v1}, [I";  // filled-new-array
      return " {v0}, Lcom/example/C;->m()V";
    case InsnFormat::k3rc:
      if (op == 0x25) return " {v0 .. v1}, [I";
      return " {v0 .. v1}, Lcom/example/C;->m()V";
    case InsnFormat::k45cc:
      return " {v0, v1}, Ljava/lang/invoke/MethodHandle;->invoke([Ljava/lang/Object;)"
             "Ljava/lang/Object;, (I)I";
    case InsnFormat::k4rcc:
      return " {v0 .. v1}, Ljava/lang/invoke/MethodHandle;->invoke([Ljava/lang/Object;)"
             "Ljava/lang/Object;, (I)I";
    case InsnFormat::k51l: return " v0, 0x1234567890abcdefL";
    case InsnFormat::kUnused: break;
  }
  throw InvalidSpec("cannot render unassigned opcode " + opcode_display_name(op));
}

std::vector<std::uint8_t> assigned_opcodes() {
  std::vector<std::uint8_t> out;
  for (int op = 0; op < kOpcodeCount; ++op) {
    if (opcode_info(static_cast<std::uint8_t>(op)).width > 0) {
      out.push_back(static_cast<std::uint8_t>(op));
    }
  }
  return out;
}

std::array<std::uint64_t, kOpcodeCount> draw_counts(const std::array<double, kOpcodeCount>& mean,
                                                    double dispersion, Rng& rng) {
  std::array<std::uint64_t, kOpcodeCount> counts{};
  for (int j = 0; j < kOpcodeCount; ++j) {
    if (mean[j] <= 0.0) continue;
    double v = rng.normal(mean[j], dispersion * mean[j]);
    long long c = std::llround(v);
    counts[j] = c > 0 ? static_cast<std::uint64_t>(c) : 0;
  }
  return counts;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::array<double, kOpcodeCount> parse_mean_array(const json& arr, const char* what) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(kOpcodeCount)) {
    throw InvalidSpec(std::string(what) + " must be an array of 256 numbers");
  }
  std::array<double, kOpcodeCount> out{};
  for (int j = 0; j < kOpcodeCount; ++j) {
    if (!arr[j].is_number()) throw InvalidSpec(std::string(what) + " has a non-numeric entry");
    out[j] = arr[j].get<double>();
    if (out[j] < 0.0) throw InvalidSpec(std::string(what) + " has a negative mean");
  }
  return out;
}

void validate_spec(const SyntheticSpec& spec) {
  if (spec.dispersion < 0.0) throw InvalidSpec("dispersion must be non-negative");
  if (spec.groups.empty()) throw InvalidSpec("spec declares no groups");
  std::set<GroupId> seen;
  for (const SyntheticGroupSpec& g : spec.groups) {
    if (!seen.insert(g.group).second) {
      throw InvalidSpec("group " + std::string(group_name(g.group)) + " declared twice");
    }
    if (g.benign_count < 0 || g.malicious_count < 0) {
      throw InvalidSpec("negative app count for group " + std::string(group_name(g.group)));
    }
    for (int j = 0; j < kOpcodeCount; ++j) {
      const bool unassigned = opcode_info(static_cast<std::uint8_t>(j)).width == 0;
      if (unassigned && (g.benign_mean[j] > 0.0 || g.malicious_mean[j] > 0.0)) {
        throw InvalidSpec("group " + std::string(group_name(g.group)) +
                          " puts mass on unassigned opcode " +
                          opcode_display_name(static_cast<std::uint8_t>(j)));
      }
      if (g.benign_mean[j] < 0.0 || g.malicious_mean[j] < 0.0) {
        throw InvalidSpec("negative opcode mean");
      }
    }
  }
}

}  // namespace

std::vector<std::uint8_t> SyntheticGroupSpec::planted_opcodes() const {
  std::vector<std::uint8_t> out;
  for (int j = 0; j < kOpcodeCount; ++j) {
    if (benign_mean[j] != malicious_mean[j]) out.push_back(static_cast<std::uint8_t>(j));
  }
  return out;
}

SyntheticSpec default_benchmark_spec(int benign_per_group, int malicious_per_group,
                                     std::uint64_t seed) {
  struct GroupTemplate {
    GroupId group;
    std::vector<std::string> permissions;
  };
  static const std::vector<GroupTemplate> templates = {
      {GroupId::kCalendar, {"android.permission.READ_CALENDAR"}},
      {GroupId::kCamera, {"android.permission.CAMERA"}},
      {GroupId::kContacts, {"android.permission.READ_CONTACTS"}},
      {GroupId::kLocation, {"android.permission.ACCESS_FINE_LOCATION"}},
      {GroupId::kMicrophone, {"android.permission.RECORD_AUDIO"}},
      {GroupId::kPhone, {"android.permission.CALL_PHONE", "android.permission.READ_PHONE_STATE"}},
      {GroupId::kSms, {"android.permission.SEND_SMS", "android.permission.READ_SMS"}},
      {GroupId::kStorage, {"android.permission.WRITE_EXTERNAL_STORAGE"}},
      {GroupId::kOthers, {"android.permission.INTERNET"}},
  };

  const auto assigned = assigned_opcodes();
  constexpr int kPlantedPerGroup = 10;
  constexpr double kGap = 40.0;

  SyntheticSpec spec;
  spec.seed = seed;
  spec.dispersion = 0.15;

  for (std::size_t gi = 0; gi < templates.size(); ++gi) {
    SyntheticGroupSpec g;
    g.group = templates[gi].group;
    g.benign_count = benign_per_group;
    g.malicious_count = malicious_per_group;
    g.permissions = templates[gi].permissions;

    // shared base profile: integral means over three quarters of the
    // assigned opcodes
    for (std::uint8_t op : assigned) {
      if (op % 4 == 3) continue;
      g.benign_mean[op] = static_cast<double>(2 + (op * 5) % 7);
    }
    g.malicious_mean = g.benign_mean;

    // ten planted opcodes per group; stride 17 is coprime with the
    // assigned-opcode count, so the picks stay distinct
    const std::size_t start = (gi * 29 + 11) % assigned.size();
    for (int k = 0; k < kPlantedPerGroup; ++k) {
      std::uint8_t op = assigned[(start + static_cast<std::size_t>(k) * 17) % assigned.size()];
      g.malicious_mean[op] = g.benign_mean[op] + kGap;
    }
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

SyntheticSpec parse_synthetic_spec_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidSpec("spec root must be an object");
  if (doc.value("version", 1) != 1) throw InvalidSpec("unsupported spec version");

  SyntheticSpec spec;
  spec.seed = doc.value("seed", std::uint64_t{7});
  spec.dispersion = doc.value("dispersion", 0.15);
  spec.emit_dex = doc.value("emit_dex", false);

  if (!doc.contains("groups") || !doc["groups"].is_array() || doc["groups"].empty()) {
    throw InvalidSpec("spec needs a non-empty groups array");
  }
  const auto assigned = assigned_opcodes();
  for (const json& jg : doc["groups"]) {
    SyntheticGroupSpec g;
    std::string name = jg.value("group", "");
    auto gid = group_from_name(name);
    if (!gid) throw InvalidSpec("unknown group '" + name + "'");
    g.group = *gid;
    g.benign_count = jg.value("benign", 0);
    g.malicious_count = jg.value("malicious", 0);
    if (jg.contains("permissions")) {
      for (const json& p : jg["permissions"]) g.permissions.push_back(p.get<std::string>());
    }

    if (jg.contains("benign_mean") || jg.contains("malicious_mean")) {
      if (!jg.contains("benign_mean") || !jg.contains("malicious_mean")) {
        throw InvalidSpec("explicit means need both benign_mean and malicious_mean");
      }
      g.benign_mean = parse_mean_array(jg["benign_mean"], "benign_mean");
      g.malicious_mean = parse_mean_array(jg["malicious_mean"], "malicious_mean");
    } else {
      // shorthand: flat base mean over the assigned opcodes plus a planted
      // gap on the listed opcodes
      const double base = jg.value("base_mean", 5.0);
      const double gap = jg.value("gap", 40.0);
      if (base < 0.0 || gap < 0.0) throw InvalidSpec("base_mean and gap must be non-negative");
      for (std::uint8_t op : assigned) g.benign_mean[op] = base;
      g.malicious_mean = g.benign_mean;
      if (!jg.contains("planted") || !jg["planted"].is_array()) {
        throw InvalidSpec("shorthand group spec needs a planted opcode array");
      }
      for (const json& jp : jg["planted"]) {
        int op = jp.get<int>();
        if (op < 0 || op > 0xff || opcode_info(static_cast<std::uint8_t>(op)).width == 0) {
          throw InvalidSpec("planted opcode " + std::to_string(op) + " is not an assigned opcode");
        }
        g.malicious_mean[op] = g.benign_mean[op] + gap;
      }
    }
    spec.groups.push_back(std::move(g));
  }
  validate_spec(spec);
  return spec;
}

std::string serialize_synthetic_spec(const SyntheticSpec& spec) {
  json doc;
  doc["version"] = 1;
  doc["seed"] = spec.seed;
  doc["dispersion"] = spec.dispersion;
  doc["emit_dex"] = spec.emit_dex;
  doc["groups"] = json::array();
  for (const SyntheticGroupSpec& g : spec.groups) {
    json jg;
    jg["group"] = std::string(group_name(g.group));
    jg["benign"] = g.benign_count;
    jg["malicious"] = g.malicious_count;
    jg["permissions"] = g.permissions;
    jg["benign_mean"] = std::vector<double>(g.benign_mean.begin(), g.benign_mean.end());
    jg["malicious_mean"] = std::vector<double>(g.malicious_mean.begin(), g.malicious_mean.end());
    doc["groups"].push_back(std::move(jg));
  }
  return doc.dump(2) + "\n";
}

std::string render_smali_for_counts(const std::array<std::uint64_t, kOpcodeCount>& counts,
                                    std::string_view class_name) {
  std::string out;
  out += ".class public L" + std::string(class_name) + ";\n";
  out += ".super Ljava/lang/Object;\n\n";
  out += ".method public static run()V\n";
  out += "    .registers 10\n";
  out += "    :L0\n";

  for (int op = 0; op < kOpcodeCount; ++op) {
    if (counts[op] == 0) continue;
    std::string line = "    " + std::string(opcode_mnemonic(static_cast<std::uint8_t>(op))) +
                       operand_text(static_cast<std::uint8_t>(op)) + "\n";
    for (std::uint64_t i = 0; i < counts[op]; ++i) out += line;
  }

  if (counts[kOpPackedSwitch] > 0) {
    out += "    :ps_data\n";
    out += "    .packed-switch 0x0\n";
    out += "        :L0\n";
    out += "        :L0\n";
    out += "    .end packed-switch\n";
  }
  if (counts[kOpSparseSwitch] > 0) {
    out += "    :ss_data\n";
    out += "    .sparse-switch\n";
    out += "        0x1 -> :L0\n";
    out += "        0x2 -> :L0\n";
    out += "    .end sparse-switch\n";
  }
  if (counts[kOpFillArrayData] > 0) {
    out += "    :fad_data\n";
    out += "    .array-data 4\n";
    out += "        0x1\n";
    out += "        0x2\n";
    out += "    .end array-data\n";
  }
  out += ".end method\n";
  return out;
}

std::string render_manifest_xml(const PermissionSet& perms, std::string_view package) {
  std::string out = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  out += "<manifest xmlns:android=\"http://schemas.android.com/apk/res/android\"\n";
  out += "    package=\"" + std::string(package) + "\">\n";
  for (const std::string& p : perms.permissions) {
    out += "    <uses-permission android:name=\"" + p + "\"/>\n";
  }
  out += "    <application android:label=\"synthetic\"/>\n";
  out += "</manifest>\n";
  return out;
}

GenerationResult generate_synthetic(const SyntheticSpec& spec, const fs::path& out_dir) {
  validate_spec(spec);

  GenerationResult result;
  result.manifest.base_dir = out_dir;
  fs::create_directories(out_dir / "apps");

  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const SyntheticGroupSpec& g = spec.groups[gi];
    PermissionSet perms;
    for (const std::string& p : g.permissions) perms.add(p);

    for (int cls = 0; cls < 2; ++cls) {
      const Label label = cls == 0 ? Label::kBenign : Label::kMalicious;
      const int count = cls == 0 ? g.benign_count : g.malicious_count;
      const auto& mean = cls == 0 ? g.benign_mean : g.malicious_mean;

      for (int i = 0; i < count; ++i) {
        char idbuf[96];
        std::snprintf(idbuf, sizeof(idbuf), "%s_%c%04d", lower(group_name(g.group)).c_str(),
                      cls == 0 ? 'b' : 'm', i);
        const std::string app_id = idbuf;

        Rng rng(Rng::mix({spec.seed, gi, static_cast<std::uint64_t>(cls),
                          static_cast<std::uint64_t>(i)}));
        auto counts = draw_counts(mean, spec.dispersion, rng);

        const fs::path app_dir = out_dir / "apps" / app_id;
        fs::create_directories(app_dir);
        atomic_write_file(app_dir / "AndroidManifest.xml",
                          render_manifest_xml(perms, "com.synthetic." + app_id));

        GeneratedApp app;
        app.app_id = app_id;
        app.label = label;
        app.group = g.group;

        if (spec.emit_dex) {
          std::vector<std::uint8_t> seq;
          for (int op = 0; op < kOpcodeCount; ++op) {
            for (std::uint64_t c = 0; c < counts[op]; ++c) {
              seq.push_back(static_cast<std::uint8_t>(op));
            }
          }
          std::vector<std::uint8_t> encoded;
          Bytes dex = build_minimal_dex_from_opcodes(seq, &encoded);
          atomic_write_file(app_dir / "classes.dex", dex);
          for (std::uint8_t op : encoded) app.histogram.bump(op);
        } else {
          const fs::path smali_dir = app_dir / "smali";
          fs::create_directories(smali_dir);
          atomic_write_file(smali_dir / "Main.smali",
                            render_smali_for_counts(counts, "com/synthetic/" + app_id + "/Main"));
          for (int op = 0; op < kOpcodeCount; ++op) {
            app.histogram.counts[op] = counts[op];
            app.histogram.total += counts[op];
          }
        }

        result.manifest.entries.push_back(
            {app_id, app_dir, label});
        result.apps.push_back(std::move(app));
      }
    }
  }

  atomic_write_file(out_dir / "manifest.tsv", serialize_manifest(result.manifest));
  atomic_write_file(out_dir / "synthetic_spec.json", serialize_synthetic_spec(spec));
  return result;
}

}  // namespace dexsieve
