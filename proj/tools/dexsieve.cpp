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

// Command-line front end. Pipeline stages are individually invokable and
// chained through on-disk artifacts inside one output directory:
//
//   generate-synthetic -> manifest.tsv + apps/
//   extract            -> histograms.tsv permissions.tsv index.tsv
//                         quarantine.tsv cache/
//   group              -> groups.tsv group_sizes.tsv
//   select             -> features/<G>.tsv reports/diff_<G>.tsv
//   train              -> models/<G>_<kind>_<n>.bin
//   evaluate           -> one cell result
//   sweep              -> report/ (cells.tsv, tables, curves)
//   report             -> re-render tables from an existing cells.tsv
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "dexsieve/corpus.hpp"
#include "dexsieve/evaluate.hpp"
#include "dexsieve/io_util.hpp"
#include "dexsieve/report_io.hpp"
#include "dexsieve/synthetic.hpp"
#include "dexsieve/worker_pool.hpp"

namespace fs = std::filesystem;
using namespace dexsieve;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct ProvenanceBuilder {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> kv;

  void add(std::string key, std::string value) { kv.emplace_back(std::move(key), std::move(value)); }

  std::string render() const {
    std::string out = std::string("# tool: ") + kToolName + " " + kToolVersion + "\n";
    out += "# config: subcommand=" + subcommand;
    for (const auto& [k, v] : kv) out += " " + k + "=" + v;
    out += "\n";
    return out;
  }
};

std::string bool_str(bool b) { return b ? "1" : "0"; }

// ---- extracted-directory artifacts -----------------------------------------

struct ExtractedApp {
  std::string app_id;
  std::optional<Label> label;
  OpcodeHistogram histogram;
  PermissionSet permissions;
};

struct ExtractedDir {
  std::vector<ExtractedApp> apps;  // index order
  std::map<std::string, std::size_t> by_id;
};

std::string render_permissions_line(const std::string& app_id, const PermissionSet& perms) {
  std::string joined;
  for (const std::string& p : perms.permissions) {
    if (!joined.empty()) joined += ';';
    joined += p;
  }
  if (joined.empty()) joined = "-";
  return app_id + "\t" + joined;
}

void write_extracted_dir(const fs::path& dir, const IngestResult& ingested,
                         const std::string& provenance) {
  std::string hist = std::string(kHistogramFileHeader) + provenance;
  std::string perms = "# dexsieve permissions v1\n" + provenance +
                      "# columns: app_id <TAB> ';'-joined permissions or '-'\n";
  std::string index = "# dexsieve extraction index v1\n" + provenance +
                      "# columns: app_id <TAB> label <TAB> status\n";
  std::string quarantine = "# dexsieve quarantine log v1\n" + provenance +
                           "# columns: app_id <TAB> reason\n";

  for (const AppExtraction& app : ingested.apps) {
    const std::string label = app.label ? std::string(label_name(*app.label)) : "-";
    if (app.ok) {
      hist += histogram_record(app.app_id, app.histogram) + "\n";
      perms += render_permissions_line(app.app_id, app.permissions) + "\n";
      index += app.app_id + "\t" + label + "\tok\n";
    } else {
      index += app.app_id + "\t" + label + "\tquarantined\n";
      quarantine += app.app_id + "\t" + app.error + "\n";
    }
  }

  atomic_write_file(dir / "histograms.tsv", hist);
  atomic_write_file(dir / "permissions.tsv", perms);
  atomic_write_file(dir / "index.tsv", index);
  atomic_write_file(dir / "quarantine.tsv", quarantine);
  atomic_write_file(dir / "run_config.txt", provenance);
}

ExtractedDir load_extracted_dir(const fs::path& dir) {
  ExtractedDir out;

  std::istringstream index(read_file_text(dir / "index.tsv"));
  std::string line;
  while (std::getline(index, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split(t, '\t');
    if (f.size() != 3) throw IoError("bad index.tsv row: '" + t + "'");
    if (f[2] != "ok") continue;  // quarantined apps carry no data
    ExtractedApp app;
    app.app_id = f[0];
    if (f[1] != "-") {
      auto l = label_from_name(f[1]);
      if (!l) throw IoError("bad label in index.tsv: '" + f[1] + "'");
      app.label = *l;
    }
    out.by_id[app.app_id] = out.apps.size();
    out.apps.push_back(std::move(app));
  }

  std::istringstream hist(read_file_text(dir / "histograms.tsv"));
  while (std::getline(hist, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto [id, h] = parse_histogram_record(t);
    auto it = out.by_id.find(id);
    if (it == out.by_id.end()) throw IoError("histograms.tsv names unknown app '" + id + "'");
    out.apps[it->second].histogram = h;
  }

  std::istringstream perms(read_file_text(dir / "permissions.tsv"));
  while (std::getline(perms, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    if (f.size() != 2) throw IoError("bad permissions.tsv row: '" + line + "'");
    auto it = out.by_id.find(f[0]);
    if (it == out.by_id.end()) throw IoError("permissions.tsv names unknown app '" + f[0] + "'");
    if (f[1] != "-") {
      for (const std::string& p : split(f[1], ';')) out.apps[it->second].permissions.add(p);
    }
  }
  return out;
}

std::map<std::string, std::set<GroupId>> load_groups_file(const fs::path& dir) {
  std::map<std::string, std::set<GroupId>> out;
  std::istringstream in(read_file_text(dir / "groups.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split(t, '\t');
    if (f.size() != 2) throw IoError("bad groups.tsv row: '" + t + "'");
    std::set<GroupId> groups;
    for (const std::string& name : split(f[1], ';')) {
      auto g = group_from_name(name);
      if (!g) throw IoError("unknown group '" + name + "' in groups.tsv");
      groups.insert(*g);
    }
    out.emplace(f[0], std::move(groups));
  }
  return out;
}

// Labeled per-group buckets in index order; unlabeled apps are left out.
std::vector<GroupData> build_group_data(const ExtractedDir& extracted,
                                        const std::map<std::string, std::set<GroupId>>& groups) {
  std::map<GroupId, GroupData> buckets;
  for (const ExtractedApp& app : extracted.apps) {
    if (!app.label) continue;
    auto it = groups.find(app.app_id);
    if (it == groups.end()) continue;
    for (GroupId g : it->second) {
      GroupData& bucket = buckets[g];
      bucket.group = g;
      bucket.apps.push_back({app.app_id, *app.label});
      bucket.histograms.push_back(app.histogram);
    }
  }
  std::vector<GroupData> out;
  out.reserve(buckets.size());
  for (auto& [g, data] : buckets) out.push_back(std::move(data));
  return out;
}

PermissionGroupMap load_mapping_or_builtin(const std::string& mapping_path) {
  if (mapping_path.empty()) return PermissionGroupMap::builtin();
  return PermissionGroupMap::load(mapping_path);
}

std::vector<ClassifierKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<ClassifierKind> kinds;
  for (const std::string& name : names) {
    auto k = classifier_kind_from_name(name);
    if (!k) throw InvalidSpec("unknown classifier kind '" + name + "' (tree|forest|nbtree)");
    kinds.push_back(*k);
  }
  if (kinds.empty()) throw InvalidSpec("no classifier kinds selected");
  return kinds;
}

std::string kinds_str(const std::vector<ClassifierKind>& kinds) {
  std::string out;
  for (ClassifierKind k : kinds) {
    if (!out.empty()) out += ',';
    out += classifier_kind_name(k);
  }
  return out;
}

std::string ints_str(const std::vector<int>& v) {
  std::string out;
  for (int x : v) {
    if (!out.empty()) out += ',';
    out += std::to_string(x);
  }
  return out;
}

// ---- subcommand bodies ------------------------------------------------------

struct CommonEvalFlags {
  std::uint64_t seed = 7;
  double test_fraction = 0.2;
  bool include_sensors = false;
  bool include_test_in_selection = false;
  bool relative_frequency = false;
  unsigned workers = default_worker_count();
  Hyperparameters hyper;
};

int cmd_generate(const std::string& out_dir, const std::string& spec_path, std::uint64_t seed,
                 int benign, int malicious, bool emit_dex, bool spec_given, bool seed_given) {
  SyntheticSpec spec;
  if (spec_given) {
    spec = parse_synthetic_spec_json(read_file_text(spec_path));
    if (seed_given) spec.seed = seed;
  } else {
    spec = default_benchmark_spec(benign, malicious, seed);
  }
  spec.emit_dex = emit_dex || spec.emit_dex;

  GenerationResult result = generate_synthetic(spec, out_dir);
  std::cout << "generated " << result.apps.size() << " apps across " << spec.groups.size()
            << " groups under " << out_dir << "\n"
            << "manifest: " << (fs::path(out_dir) / "manifest.tsv").string() << "\n";
  return kExitOk;
}

int cmd_extract(const std::string& manifest_path, const std::string& out_dir, unsigned workers,
                bool verify_dex, const std::string& unknown_mode) {
  ExtractionOptions opts;
  opts.dex.verify_checksum = verify_dex;
  opts.smali.on_unknown = unknown_mode == "warn" ? SmaliOptions::OnUnknown::kWarnSkip
                                                 : SmaliOptions::OnUnknown::kFail;

  ProvenanceBuilder prov;
  prov.subcommand = "extract";
  prov.add("manifest", manifest_path);
  prov.add("out", out_dir);
  prov.add("verify_dex_checksum", bool_str(verify_dex));
  prov.add("unknown_mnemonic", unknown_mode);

  CorpusManifest manifest = load_manifest(manifest_path);
  IngestResult ingested = ingest(manifest, fs::path(out_dir) / "cache", opts, workers);
  write_extracted_dir(out_dir, ingested, prov.render());

  std::cout << "extracted=" << ingested.extracted << " cached=" << ingested.cached
            << " quarantined=" << ingested.quarantined << "\n";
  if (!manifest.entries.empty() && ingested.quarantined == manifest.entries.size()) {
    std::cerr << "error: every file was quarantined; see " << out_dir << "/quarantine.tsv\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_group(const std::string& extracted_dir, bool include_sensors,
              const std::string& mapping_path) {
  PermissionGroupMap mapping = load_mapping_or_builtin(mapping_path);
  GroupingOptions gopts{include_sensors};

  ProvenanceBuilder prov;
  prov.subcommand = "group";
  prov.add("extracted", extracted_dir);
  prov.add("include_sensors", bool_str(include_sensors));
  prov.add("mapping", mapping_path.empty() ? "builtin" : mapping_path);

  ExtractedDir extracted = load_extracted_dir(extracted_dir);

  std::string groups_tsv = "# dexsieve groups v1\n" + prov.render() +
                           "# columns: app_id <TAB> ';'-joined groups\n";
  std::map<GroupId, std::array<std::size_t, 3>> sizes;  // benign, malicious, unlabeled
  for (const ExtractedApp& app : extracted.apps) {
    auto groups = assign_groups(app.permissions, mapping, gopts);
    std::string joined;
    for (GroupId g : groups) {
      if (!joined.empty()) joined += ';';
      joined += group_name(g);
      auto& counts = sizes[g];
      if (!app.label) ++counts[2];
      else if (*app.label == Label::kBenign) ++counts[0];
      else ++counts[1];
    }
    groups_tsv += app.app_id + "\t" + joined + "\n";
  }

  std::string sizes_tsv = "# dexsieve group sizes v1\n" + prov.render() +
                          "# columns: group <TAB> benign <TAB> malicious <TAB> unlabeled\n";
  for (const auto& [g, counts] : sizes) {
    sizes_tsv += std::string(group_name(g)) + "\t" + std::to_string(counts[0]) + "\t" +
                 std::to_string(counts[1]) + "\t" + std::to_string(counts[2]) + "\n";
  }

  atomic_write_file(fs::path(extracted_dir) / "groups.tsv", groups_tsv);
  atomic_write_file(fs::path(extracted_dir) / "group_sizes.tsv", sizes_tsv);
  std::cout << "grouped " << extracted.apps.size() << " apps into " << sizes.size()
            << " buckets\n";
  return kExitOk;
}

int cmd_select(const std::string& extracted_dir, const std::string& group_name_arg, int n,
               int report_top, bool relative_frequency) {
  ProvenanceBuilder prov;
  prov.subcommand = "select";
  prov.add("extracted", extracted_dir);
  prov.add("group", group_name_arg);
  prov.add("n", std::to_string(n));
  prov.add("report_top", std::to_string(report_top));
  prov.add("relative_frequency", bool_str(relative_frequency));

  ExtractedDir extracted = load_extracted_dir(extracted_dir);
  auto groups = load_groups_file(extracted_dir);
  std::vector<GroupData> buckets = build_group_data(extracted, groups);

  const FrequencyMode mode =
      relative_frequency ? FrequencyMode::kRelative : FrequencyMode::kRawCount;

  bool any = false;
  for (const GroupData& bucket : buckets) {
    if (group_name_arg != "all" && group_name(bucket.group) != group_name_arg) continue;
    any = true;

    std::vector<OpcodeHistogram> ben, mal;
    for (std::size_t i = 0; i < bucket.apps.size(); ++i) {
      (bucket.apps[i].label == Label::kBenign ? ben : mal).push_back(bucket.histograms[i]);
    }
    std::string gname(group_name(bucket.group));
    try {
      ClassMeanProfile profile = compute_profile(ben, mal, mode);
      FeatureRanking ranking = rank_features(profile);
      atomic_write_file(fs::path(extracted_dir) / "features" / (gname + ".tsv"),
                        prov.render() + serialize_feature_list(gname, ranking, n));
      atomic_write_file(fs::path(extracted_dir) / "reports" / ("diff_" + gname + ".tsv"),
                        prov.render() + difference_report(ranking, report_top));
      std::cout << gname << ": wrote features/" << gname << ".tsv and reports/diff_" << gname
                << ".tsv\n";
    } catch (const EmptyClass& e) {
      std::cout << gname << ": skipped (" << e.what() << ")\n";
    }
  }
  if (!any) {
    std::cerr << "error: no bucket named '" << group_name_arg << "'; run `dexsieve group` first\n";
    return kExitData;
  }
  return kExitOk;
}

GroupData find_bucket(const std::string& extracted_dir, const std::string& group_name_arg,
                      ExtractedDir& extracted_out) {
  extracted_out = load_extracted_dir(extracted_dir);
  auto groups = load_groups_file(extracted_dir);
  for (GroupData& bucket : build_group_data(extracted_out, groups)) {
    if (group_name(bucket.group) == group_name_arg) return std::move(bucket);
  }
  throw InvalidSpec("no bucket named '" + group_name_arg + "'; run `dexsieve group` first");
}

int cmd_train(const std::string& extracted_dir, const std::string& group_name_arg,
              const std::string& kind_name, int n, const CommonEvalFlags& flags) {
  auto kind = classifier_kind_from_name(kind_name);
  if (!kind) throw InvalidSpec("unknown classifier kind '" + kind_name + "'");

  ExtractedDir extracted;
  GroupData bucket = find_bucket(extracted_dir, group_name_arg, extracted);

  EvalOptions opts;
  opts.seed = flags.seed;
  opts.test_fraction = flags.test_fraction;
  opts.hyper = flags.hyper;
  opts.frequency_mode =
      flags.relative_frequency ? FrequencyMode::kRelative : FrequencyMode::kRawCount;
  opts.include_test_in_selection = flags.include_test_in_selection;

  SplitSpec split_spec;
  split_spec.test_fraction = opts.test_fraction;
  split_spec.seed = group_split_seed(opts.seed, bucket.group);
  SplitResult split_result = split(bucket.apps, split_spec);

  std::vector<OpcodeHistogram> ben, mal;
  for (std::size_t i : split_result.train) {
    (bucket.apps[i].label == Label::kBenign ? ben : mal).push_back(bucket.histograms[i]);
  }
  if (opts.include_test_in_selection) {
    for (std::size_t i : split_result.test) {
      (bucket.apps[i].label == Label::kBenign ? ben : mal).push_back(bucket.histograms[i]);
    }
  }
  FeatureRanking ranking = rank_features(compute_profile(ben, mal, opts.frequency_mode));
  std::vector<std::uint8_t> features = top_n(ranking, n);

  std::vector<FeatureVector> train_set;
  for (std::size_t i : split_result.train) {
    FeatureVector v;
    for (std::uint8_t op : features) {
      v.values.push_back(static_cast<double>(bucket.histograms[i].counts[op]));
    }
    v.label = bucket.apps[i].label;
    train_set.push_back(std::move(v));
  }

  TrainedModel model = train(
      *kind, train_set, opts.hyper,
      static_cast<std::int64_t>(cell_train_seed(opts.seed, bucket.group, *kind, n)),
      std::vector<std::uint16_t>(features.begin(), features.end()));

  fs::path model_path = fs::path(extracted_dir) / "models" /
                        (group_name_arg + "_" + kind_name + "_" + std::to_string(n) + ".bin");
  atomic_write_file(model_path, serialize_model(model));
  std::cout << "trained " << kind_name << " on " << train_set.size() << " apps ("
            << ben.size() << " benign histograms in selection), wrote " << model_path.string()
            << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& extracted_dir, const std::string& model_path,
                 const std::string& group_name_arg, const CommonEvalFlags& flags,
                 const std::string& out_file) {
  TrainedModel model = deserialize_model(read_file_bytes(model_path));

  ExtractedDir extracted;
  GroupData bucket = find_bucket(extracted_dir, group_name_arg, extracted);

  SplitSpec split_spec;
  split_spec.test_fraction = flags.test_fraction;
  split_spec.seed = group_split_seed(flags.seed, bucket.group);
  SplitResult split_result = split(bucket.apps, split_spec);

  ConfusionCounts counts;
  for (std::size_t i : split_result.test) {
    FeatureVector x;
    for (std::uint16_t op : model.feature_list) {
      x.values.push_back(static_cast<double>(bucket.histograms[i].counts[op & 0xff]));
    }
    Label predicted = predict(model, x).label;
    Label actual = bucket.apps[i].label;
    if (actual == Label::kMalicious) (predicted == Label::kMalicious ? counts.tp : counts.fn)++;
    else (predicted == Label::kBenign ? counts.tn : counts.fp)++;
  }

  std::ostringstream line;
  line << "group=" << group_name_arg << " kind=" << classifier_kind_name(model.kind)
       << " n=" << model.feature_list.size() << " tp=" << counts.tp << " tn=" << counts.tn
       << " fp=" << counts.fp << " fn=" << counts.fn
       << " accuracy=" << format_percent(accuracy_percent(counts))
       << " tp_rate=" << format_double(tp_rate(counts), 2)
       << " tn_rate=" << format_double(tn_rate(counts), 2);
  std::cout << line.str() << "\n";

  if (!out_file.empty()) {
    ProvenanceBuilder prov;
    prov.subcommand = "evaluate";
    prov.add("model", model_path);
    prov.add("group", group_name_arg);
    prov.add("seed", std::to_string(flags.seed));
    prov.add("test_fraction", format_double(flags.test_fraction, 6));
    atomic_write_file(out_file, prov.render() + line.str() + "\n");
  }
  return kExitOk;
}

int cmd_sweep(const std::string& extracted_dir, const std::string& out_dir,
              const std::vector<std::string>& kind_names, const std::vector<int>& n_list,
              const CommonEvalFlags& flags) {
  EvalOptions opts;
  opts.seed = flags.seed;
  opts.test_fraction = flags.test_fraction;
  opts.kinds = parse_kinds(kind_names);
  opts.feature_counts = n_list;
  opts.hyper = flags.hyper;
  opts.frequency_mode =
      flags.relative_frequency ? FrequencyMode::kRelative : FrequencyMode::kRawCount;
  opts.include_test_in_selection = flags.include_test_in_selection;
  opts.workers = flags.workers;

  for (int n : opts.feature_counts) {
    if (n < 1 || n > kOpcodeCount) throw InvalidSpec("feature count " + std::to_string(n) + " outside 1..256");
  }

  ProvenanceBuilder prov;
  prov.subcommand = "sweep";
  prov.add("extracted", extracted_dir);
  prov.add("out", out_dir);
  prov.add("seed", std::to_string(opts.seed));
  prov.add("test_fraction", format_double(opts.test_fraction, 6));
  prov.add("kinds", kinds_str(opts.kinds));
  prov.add("n_list", ints_str(opts.feature_counts));
  prov.add("include_test_in_selection", bool_str(opts.include_test_in_selection));
  prov.add("relative_frequency", bool_str(flags.relative_frequency));
  prov.add("min_leaf", std::to_string(opts.hyper.min_leaf));
  prov.add("forest_trees", std::to_string(opts.hyper.forest_trees));
  prov.add("nb_leaf_threshold", std::to_string(opts.hyper.nb_leaf_threshold));

  ExtractedDir extracted = load_extracted_dir(extracted_dir);
  auto groups = load_groups_file(extracted_dir);
  std::vector<GroupData> buckets = build_group_data(extracted, groups);
  if (buckets.empty()) {
    std::cerr << "error: no group buckets; run `dexsieve group` first\n";
    return kExitData;
  }

  EvaluationReport report = sweep(buckets, opts);

  auto files = render_report(report, opts, prov.render());
  for (const auto& [rel, content] : files) {
    atomic_write_file(fs::path(out_dir) / rel, content);
  }

  std::size_t ok = 0;
  for (const CellResult& c : report.cells) ok += c.ok ? 1 : 0;
  std::cout << "sweep: " << ok << "/" << report.cells.size() << " cells ok, report under "
            << out_dir << "\n";
  if (auto overall = report.overall_best_average()) {
    std::cout << "overall average of group maxima: " << format_percent(*overall) << "\n";
  }
  if (ok == 0) return kExitData;
  return kExitOk;
}

int cmd_report(const std::string& cells_path, const std::string& out_dir) {
  ProvenanceBuilder prov;
  prov.subcommand = "report";
  prov.add("cells", cells_path);
  prov.add("out", out_dir);

  EvaluationReport report = parse_cells_tsv(read_file_text(cells_path));
  EvalOptions opts;  // rendering only consults the report itself
  auto files = render_report(report, opts, prov.render());
  for (const auto& [rel, content] : files) {
    atomic_write_file(fs::path(out_dir) / rel, content);
  }
  std::cout << "re-rendered " << files.size() << " report files under " << out_dir << "\n";
  return kExitOk;
}

void add_eval_flags(CLI::App* cmd, CommonEvalFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Master seed; every random draw derives from it");
  cmd->add_option("--test-fraction", flags.test_fraction, "Holdout fraction per group")
      ->check(CLI::Range(0.001, 0.999));
  cmd->add_flag("--include-test-in-selection", flags.include_test_in_selection,
                "Let feature selection see the holdout (replication mode; leaks by design)");
  cmd->add_flag("--relative-frequency", flags.relative_frequency,
                "Use per-app relative opcode frequency instead of raw counts in selection");
  cmd->add_option("--min-leaf", flags.hyper.min_leaf, "Minimum samples per tree leaf")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--forest-trees", flags.hyper.forest_trees, "Trees per forest")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--nb-leaf-threshold", flags.hyper.nb_leaf_threshold,
                  "nb-tree nodes smaller than this become NB leaves")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", flags.hyper.max_depth, "Tree depth cap, 0 = unlimited");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dexsieve: opcode-histogram malware detection over permission groups"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  // generate-synthetic
  std::string gen_out, gen_spec;
  std::uint64_t gen_seed = 7;
  int gen_benign = 85, gen_malicious = 80;
  bool gen_emit_dex = false;
  auto* gen = app.add_subcommand("generate-synthetic", "Materialize a synthetic labeled corpus");
  gen->add_option("--out", gen_out, "Output directory")->required();
  auto* gen_spec_opt = gen->add_option("--spec", gen_spec, "Spec JSON (defaults to the benchmark corpus)");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--benign", gen_benign, "Benign apps per group (default spec only)");
  gen->add_option("--malicious", gen_malicious, "Malicious apps per group (default spec only)");
  gen->add_flag("--emit-dex", gen_emit_dex, "Materialize minimal DEX instead of smali");

  // extract
  std::string ext_manifest, ext_out, ext_unknown = "fail";
  unsigned ext_workers = default_worker_count();
  bool ext_verify = false;
  auto* ext = app.add_subcommand("extract", "Extract histograms and permissions from a corpus");
  ext->add_option("--manifest", ext_manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  ext->add_option("--out", ext_out, "Output directory")->required();
  ext->add_option("--workers", ext_workers, "Worker threads");
  ext->add_flag("--verify-dex-checksum", ext_verify, "Verify DEX Adler-32 and SHA-1 fields");
  ext->add_option("--unknown-mnemonic", ext_unknown, "fail | warn (skip with a warning)")
      ->check(CLI::IsMember({"fail", "warn"}));

  // group
  std::string grp_dir, grp_mapping;
  bool grp_sensors = false;
  auto* grp = app.add_subcommand("group", "Assign extracted apps to permission groups");
  grp->add_option("--extracted", grp_dir, "Extraction output directory")->required()->check(CLI::ExistingDirectory);
  grp->add_flag("--include-sensors", grp_sensors, "Keep the Sensors group in play");
  grp->add_option("--mapping", grp_mapping, "Permission group mapping file")->check(CLI::ExistingFile);

  // select
  std::string sel_dir, sel_group = "all";
  int sel_n = 200, sel_top = 50;
  bool sel_rel = false;
  auto* sel = app.add_subcommand("select", "Rank opcodes by class-mean difference per group");
  sel->add_option("--extracted", sel_dir, "Extraction output directory")->required()->check(CLI::ExistingDirectory);
  sel->add_option("--group", sel_group, "Group name or 'all'");
  sel->add_option("-n,--n", sel_n, "Features to keep")->check(CLI::Range(1, 256));
  sel->add_option("--report-top", sel_top, "Rows in the difference report")->check(CLI::Range(1, 256));
  sel->add_flag("--relative-frequency", sel_rel, "Relative frequency instead of raw counts");

  // train
  std::string trn_dir, trn_group, trn_kind;
  int trn_n = 80;
  CommonEvalFlags trn_flags;
  auto* trn = app.add_subcommand("train", "Train one per-group classifier");
  trn->add_option("--extracted", trn_dir, "Extraction output directory")->required()->check(CLI::ExistingDirectory);
  trn->add_option("--group", trn_group, "Group name")->required();
  trn->add_option("--kind", trn_kind, "tree | forest | nbtree")->required();
  trn->add_option("-n,--n", trn_n, "Feature count")->check(CLI::Range(1, 256));
  add_eval_flags(trn, trn_flags);

  // evaluate
  std::string evl_dir, evl_model, evl_group, evl_out;
  CommonEvalFlags evl_flags;
  auto* evl = app.add_subcommand("evaluate", "Evaluate a trained model on its group holdout");
  evl->add_option("--extracted", evl_dir, "Extraction output directory")->required()->check(CLI::ExistingDirectory);
  evl->add_option("--model", evl_model, "Model file")->required()->check(CLI::ExistingFile);
  evl->add_option("--group", evl_group, "Group name")->required();
  evl->add_option("--out", evl_out, "Also write the cell result here");
  add_eval_flags(evl, evl_flags);

  // sweep
  std::string swp_dir, swp_out;
  std::vector<std::string> swp_kinds = {"tree", "forest", "nbtree"};
  std::vector<int> swp_nlist = default_feature_counts();
  CommonEvalFlags swp_flags;
  auto* swp = app.add_subcommand("sweep", "Full grid: groups x classifiers x feature counts");
  swp->add_option("--extracted", swp_dir, "Extraction output directory")->required()->check(CLI::ExistingDirectory);
  swp->add_option("--out", swp_out, "Report directory (default <extracted>/report)");
  swp->add_option("--kinds", swp_kinds, "Classifier kinds")->delimiter(',');
  swp->add_option("--n-list", swp_nlist, "Feature counts")->delimiter(',');
  swp->add_option("--workers", swp_flags.workers, "Worker threads");
  add_eval_flags(swp, swp_flags);

  // report
  std::string rep_cells, rep_out;
  auto* rep = app.add_subcommand("report", "Re-render tables and curves from cells.tsv");
  rep->add_option("--cells", rep_cells, "cells.tsv from a sweep")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", rep_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_out, gen_spec, gen_seed, gen_benign, gen_malicious, gen_emit_dex,
                          gen_spec_opt->count() > 0, gen_seed_opt->count() > 0);
    }
    if (ext->parsed()) return cmd_extract(ext_manifest, ext_out, ext_workers, ext_verify, ext_unknown);
    if (grp->parsed()) return cmd_group(grp_dir, grp_sensors, grp_mapping);
    if (sel->parsed()) return cmd_select(sel_dir, sel_group, sel_n, sel_top, sel_rel);
    if (trn->parsed()) return cmd_train(trn_dir, trn_group, trn_kind, trn_n, trn_flags);
    if (evl->parsed()) return cmd_evaluate(evl_dir, evl_model, evl_group, evl_flags, evl_out);
    if (swp->parsed()) {
      if (swp_out.empty()) swp_out = (fs::path(swp_dir) / "report").string();
      return cmd_sweep(swp_dir, swp_out, swp_kinds, swp_nlist, swp_flags);
    }
    if (rep->parsed()) return cmd_report(rep_cells, rep_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
