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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dexsieve/classifier.hpp"
#include "dexsieve/feature_select.hpp"
#include "dexsieve/histogram.hpp"
#include "dexsieve/permissions.hpp"

namespace dexsieve {

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  bool stratified = true;  // by label

  bool operator==(const SplitSpec&) const = default;
};

struct LabeledApp {
  std::string app_id;
  Label label;
};

// Index lists into the bucket, each sorted ascending. Disjoint, and together
// they cover the bucket.
struct SplitResult {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Deterministic seeded holdout; stratified proportions land within one app
// of the target fraction per label, with at least one app on each side.
// Throws TooSmallForSplit when a label (stratified) or the bucket has
// fewer than two apps, and InvalidSpec for fractions outside (0,1).
SplitResult split(std::span<const LabeledApp> bucket, const SplitSpec& spec);

struct ConfusionCounts {
  std::uint64_t tp = 0;  // malicious classified malicious
  std::uint64_t tn = 0;  // benign classified benign
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

double accuracy_percent(const ConfusionCounts& c);  // (tp+tn)/total x 100
double tp_rate(const ConfusionCounts& c);           // tp/(tp+fn)
double tn_rate(const ConfusionCounts& c);           // tn/(tn+fp)

struct CellResult {
  GroupId group = GroupId::kOthers;
  ClassifierKind kind = ClassifierKind::kTree;
  int n_features = 0;
  bool ok = false;
  std::string skip_reason;  // set when !ok
  ConfusionCounts counts;
  double accuracy = 0.0;
  double tpr = 0.0;
  double tnr = 0.0;
  std::size_t train_benign = 0, train_malicious = 0;
  std::size_t test_benign = 0, test_malicious = 0;
};

// One group's labeled apps with their histograms, bucket order preserved.
struct GroupData {
  GroupId group = GroupId::kOthers;
  std::vector<LabeledApp> apps;
  std::vector<OpcodeHistogram> histograms;  // parallel to apps
};

inline const std::vector<int>& default_feature_counts() {
  static const std::vector<int> counts = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
  return counts;
}

struct EvalOptions {
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  std::vector<ClassifierKind> kinds = {ClassifierKind::kTree, ClassifierKind::kForest,
                                       ClassifierKind::kNbTree};
  std::vector<int> feature_counts = default_feature_counts();
  Hyperparameters hyper;
  FrequencyMode frequency_mode = FrequencyMode::kRawCount;
  // Feature selection sees only the training portion unless this replication
  // escape hatch is set.
  bool include_test_in_selection = false;
  unsigned workers = 1;
};

// The group's holdout split depends on (seed, group) only, so every cell of
// a group trains and tests on the same membership; training randomness is
// keyed by (seed, group, kind, n).
std::uint64_t group_split_seed(std::uint64_t seed, GroupId group);
std::uint64_t cell_train_seed(std::uint64_t seed, GroupId group, ClassifierKind kind, int n);

// Runs one (group, kind, n) experiment. Degenerate groups come back with
// ok=false and the reason recorded instead of throwing.
CellResult evaluate_cell(const GroupData& group, ClassifierKind kind, int n_features,
                         const EvalOptions& opts);

struct GroupBest {
  GroupId group;
  ClassifierKind kind;
  int n_features;
  double accuracy;
  double tpr;
  double tnr;
};

struct EvaluationReport {
  std::vector<CellResult> cells;  // sorted by (group, kind, n)

  const CellResult* find(GroupId g, ClassifierKind k, int n) const;
  // Mean accuracy across groups with an ok cell at (kind, n); nullopt when
  // no group qualifies.
  std::optional<double> average_accuracy(ClassifierKind k, int n) const;
  // Best ok cell per group: highest accuracy, then fewer features, then
  // kind order.
  std::vector<GroupBest> per_group_best() const;
  // Mean of the per-group best accuracies.
  std::optional<double> overall_best_average() const;
};

EvaluationReport sweep(std::span<const GroupData> groups, const EvalOptions& opts);

}  // namespace dexsieve
