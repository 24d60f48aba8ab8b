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

#include "dexsieve/report_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dexsieve/io_util.hpp"

namespace dexsieve {

namespace {

constexpr const char* kCellsVersionLine = "# dexsieve sweep cells v1";

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::vector<ClassifierKind> kinds_in(const EvaluationReport& report) {
  std::set<ClassifierKind> seen;
  for (const CellResult& c : report.cells) seen.insert(c.kind);
  return {seen.begin(), seen.end()};
}

std::vector<int> feature_counts_in(const EvaluationReport& report) {
  std::set<int> seen;
  for (const CellResult& c : report.cells) seen.insert(c.n_features);
  return {seen.begin(), seen.end()};
}

std::vector<GroupId> groups_in(const EvaluationReport& report) {
  std::set<GroupId> seen;
  for (const CellResult& c : report.cells) seen.insert(c.group);
  return {seen.begin(), seen.end()};
}

std::string render_averages_tsv(const EvaluationReport& report, const std::string& provenance) {
  std::string out = "# dexsieve sweep averages v1\n" + provenance;
  out += "# columns: classifier\tn_features\taverage_accuracy\tgroups_counted\n";
  for (ClassifierKind k : kinds_in(report)) {
    for (int n : feature_counts_in(report)) {
      int counted = 0;
      for (const CellResult& c : report.cells) {
        if (c.kind == k && c.n_features == n && c.ok) ++counted;
      }
      auto avg = report.average_accuracy(k, n);
      out += std::string(classifier_kind_name(k)) + '\t' + std::to_string(n) + '\t' +
             (avg ? format_double(*avg, 6) : std::string("-")) + '\t' + std::to_string(counted) +
             '\n';
    }
  }
  return out;
}

std::string render_best_tsv(const EvaluationReport& report, const std::string& provenance) {
  std::string out = "# dexsieve per-group best v1\n" + provenance;
  out += "# columns: group\tclassifier\tn_features\taccuracy\ttn_rate\ttp_rate\n";
  for (const GroupBest& b : report.per_group_best()) {
    out += std::string(group_name(b.group)) + '\t' + std::string(classifier_kind_name(b.kind)) +
           '\t' + std::to_string(b.n_features) + '\t' + format_double(b.accuracy, 6) + '\t' +
           format_double(b.tnr, 6) + '\t' + format_double(b.tpr, 6) + '\n';
  }
  return out;
}

std::string render_summary(const EvaluationReport& report, const std::string& provenance) {
  std::string out = "# dexsieve sweep summary v1\n" + provenance;
  std::size_t ok = 0, skipped = 0;
  for (const CellResult& c : report.cells) (c.ok ? ok : skipped)++;
  out += "cells_ok\t" + std::to_string(ok) + '\n';
  out += "cells_skipped\t" + std::to_string(skipped) + '\n';
  auto overall = report.overall_best_average();
  out += "overall_average_of_group_maxima\t" + (overall ? format_percent(*overall) : std::string("-")) +
         '\n';
  return out;
}

std::string render_table_averages(const EvaluationReport& report, const std::string& provenance) {
  auto kinds = kinds_in(report);
  auto counts = feature_counts_in(report);

  std::string out = provenance;
  out += "Average accuracy (%) by classifier, across groups\n\n";
  out += pad("No. of Features", 17);
  for (ClassifierKind k : kinds) out += pad(std::string(classifier_kind_name(k)), 9);
  out += '\n';

  std::map<ClassifierKind, double> max_avg, min_avg;
  for (int n : counts) {
    out += pad(std::to_string(n), 17);
    for (ClassifierKind k : kinds) {
      auto avg = report.average_accuracy(k, n);
      out += pad(avg ? format_percent(*avg) : std::string("-"), 9);
      if (avg) {
        auto [it, fresh] = max_avg.emplace(k, *avg);
        if (!fresh) it->second = std::max(it->second, *avg);
        auto [it2, fresh2] = min_avg.emplace(k, *avg);
        if (!fresh2) it2->second = std::min(it2->second, *avg);
      }
    }
    out += '\n';
  }
  out += pad("Maximum", 17);
  for (ClassifierKind k : kinds) {
    out += pad(max_avg.count(k) ? format_percent(max_avg[k]) : std::string("-"), 9);
  }
  out += '\n';
  out += pad("Minimum", 17);
  for (ClassifierKind k : kinds) {
    out += pad(min_avg.count(k) ? format_percent(min_avg[k]) : std::string("-"), 9);
  }
  out += '\n';
  return out;
}

std::string render_table_best(const EvaluationReport& report, const std::string& provenance) {
  std::string out = provenance;
  out += "Group-wise maximum accuracy with TN and TP rates\n\n";
  out += pad("Group", 12) + pad("Best Classifier", 17) + pad("Accuracy", 10) +
         pad("Features", 10) + pad("TN", 6) + pad("TP", 6) + '\n';
  for (const GroupBest& b : report.per_group_best()) {
    out += pad(std::string(group_name(b.group)), 12) +
           pad(std::string(classifier_kind_name(b.kind)), 17) +
           pad(format_percent(b.accuracy), 10) + pad(std::to_string(b.n_features), 10) +
           pad(format_double(b.tnr, 2), 6) + pad(format_double(b.tpr, 2), 6) + '\n';
  }
  auto overall = report.overall_best_average();
  if (overall) {
    out += "\nOverall average of group maxima: " + format_percent(*overall) + "\n";
  }
  return out;
}

}  // namespace

std::string render_cells_tsv(const EvaluationReport& report, const std::string& provenance) {
  std::string out = std::string(kCellsVersionLine) + '\n' + provenance;
  out +=
      "# columns: group\tclassifier\tn_features\tstatus\ttrain_benign\ttrain_malicious\t"
      "test_benign\ttest_malicious\ttp\ttn\tfp\tfn\taccuracy\ttp_rate\ttn_rate\treason\n";
  for (const CellResult& c : report.cells) {
    out += std::string(group_name(c.group)) + '\t' + std::string(classifier_kind_name(c.kind)) +
           '\t' + std::to_string(c.n_features) + '\t' + (c.ok ? "ok" : "skipped") + '\t' +
           std::to_string(c.train_benign) + '\t' + std::to_string(c.train_malicious) + '\t' +
           std::to_string(c.test_benign) + '\t' + std::to_string(c.test_malicious) + '\t' +
           std::to_string(c.counts.tp) + '\t' + std::to_string(c.counts.tn) + '\t' +
           std::to_string(c.counts.fp) + '\t' + std::to_string(c.counts.fn) + '\t' +
           format_double(c.accuracy, 6) + '\t' + format_double(c.tpr, 6) + '\t' +
           format_double(c.tnr, 6) + '\t' + (c.ok ? "-" : c.skip_reason) + '\n';
  }
  return out;
}

EvaluationReport parse_cells_tsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool version_seen = false;
  EvaluationReport report;
  while (std::getline(in, line)) {
    if (line == kCellsVersionLine) {
      version_seen = true;
      continue;
    }
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!version_seen) throw IoError("not a dexsieve cells file (missing version line)");
    auto f = split(t, '\t');
    if (f.size() != 16) throw IoError("cells row must have 16 fields, got " + std::to_string(f.size()));

    CellResult c;
    auto group = group_from_name(f[0]);
    if (!group) throw IoError("unknown group '" + f[0] + "' in cells file");
    c.group = *group;
    auto kind = classifier_kind_from_name(f[1]);
    if (!kind) throw IoError("unknown classifier '" + f[1] + "' in cells file");
    c.kind = *kind;
    c.n_features = std::stoi(f[2]);
    c.ok = f[3] == "ok";
    c.train_benign = std::stoul(f[4]);
    c.train_malicious = std::stoul(f[5]);
    c.test_benign = std::stoul(f[6]);
    c.test_malicious = std::stoul(f[7]);
    c.counts.tp = std::stoull(f[8]);
    c.counts.tn = std::stoull(f[9]);
    c.counts.fp = std::stoull(f[10]);
    c.counts.fn = std::stoull(f[11]);
    c.accuracy = std::stod(f[12]);
    c.tpr = std::stod(f[13]);
    c.tnr = std::stod(f[14]);
    if (!c.ok) c.skip_reason = f[15];
    report.cells.push_back(std::move(c));
  }
  if (!version_seen) throw IoError("not a dexsieve cells file (missing version line)");
  return report;
}

std::map<std::string, std::string> render_report(const EvaluationReport& report,
                                                 const EvalOptions& opts,
                                                 const std::string& provenance) {
  std::map<std::string, std::string> files;
  files["cells.tsv"] = render_cells_tsv(report, provenance);
  files["averages.tsv"] = render_averages_tsv(report, provenance);
  files["best.tsv"] = render_best_tsv(report, provenance);
  files["summary.txt"] = render_summary(report, provenance);
  files["table_averages.txt"] = render_table_averages(report, provenance);
  files["table_best.txt"] = render_table_best(report, provenance);

  for (GroupId g : groups_in(report)) {
    for (ClassifierKind k : kinds_in(report)) {
      std::string body = "# dexsieve accuracy curve v1\n" + provenance +
                         "# group: " + std::string(group_name(g)) + ", classifier: " +
                         std::string(classifier_kind_name(k)) + "\n# columns: n_features\taccuracy\n";
      bool any = false;
      for (const CellResult& c : report.cells) {
        if (c.group == g && c.kind == k && c.ok) {
          body += std::to_string(c.n_features) + '\t' + format_double(c.accuracy, 6) + '\n';
          any = true;
        }
      }
      if (any) {
        files["curves/" + std::string(group_name(g)) + "_" +
              std::string(classifier_kind_name(k)) + ".tsv"] = body;
      }
    }
  }
  (void)opts;
  return files;
}

}  // namespace dexsieve
