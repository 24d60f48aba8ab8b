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

#include "dexsieve/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "dexsieve/rng.hpp"
#include "dexsieve/worker_pool.hpp"

namespace dexsieve {

namespace {

std::vector<std::size_t> label_indices(std::span<const LabeledApp> bucket, Label label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bucket.size(); ++i) {
    if (bucket[i].label == label) out.push_back(i);
  }
  return out;
}

// floor(fraction * n), clamped so both sides keep at least one app
std::size_t test_count(std::size_t n, double fraction) {
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (k < 1) k = 1;
  if (k > n - 1) k = n - 1;
  return k;
}

void split_pool(std::vector<std::size_t>& pool, double fraction, Rng& rng,
                std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
  rng.shuffle(pool);
  const std::size_t k = test_count(pool.size(), fraction);
  test.insert(test.end(), pool.begin(), pool.begin() + k);
  train.insert(train.end(), pool.begin() + k, pool.end());
}

struct PreparedGroup {
  SplitResult split;
  FeatureRanking ranking;
  std::size_t train_benign = 0, train_malicious = 0;
  std::size_t test_benign = 0, test_malicious = 0;
  bool ok = false;
  std::string skip_reason;
};

PreparedGroup prepare_group(const GroupData& group, const EvalOptions& opts) {
  PreparedGroup prep;
  SplitSpec spec;
  spec.test_fraction = opts.test_fraction;
  spec.seed = group_split_seed(opts.seed, group.group);
  spec.stratified = true;
  try {
    prep.split = split(group.apps, spec);
  } catch (const Error& e) {
    prep.skip_reason = e.what();
    return prep;
  }

  std::vector<OpcodeHistogram> ben, mal;
  auto add = [&](std::size_t i) {
    if (group.apps[i].label == Label::kBenign) ben.push_back(group.histograms[i]);
    else mal.push_back(group.histograms[i]);
  };
  for (std::size_t i : prep.split.train) add(i);
  if (opts.include_test_in_selection) {
    for (std::size_t i : prep.split.test) add(i);
  }

  prep.train_benign = 0;
  prep.train_malicious = 0;
  for (std::size_t i : prep.split.train) {
    (group.apps[i].label == Label::kBenign ? prep.train_benign : prep.train_malicious)++;
  }
  for (std::size_t i : prep.split.test) {
    (group.apps[i].label == Label::kBenign ? prep.test_benign : prep.test_malicious)++;
  }

  try {
    ClassMeanProfile profile = compute_profile(ben, mal, opts.frequency_mode);
    prep.ranking = rank_features(profile);
  } catch (const Error& e) {
    prep.skip_reason = e.what();
    return prep;
  }
  prep.ok = true;
  return prep;
}

FeatureVector project(const OpcodeHistogram& h, std::span<const std::uint8_t> features,
                      std::optional<Label> label) {
  FeatureVector v;
  v.values.reserve(features.size());
  for (std::uint8_t op : features) v.values.push_back(static_cast<double>(h.counts[op]));
  v.label = label;
  return v;
}

CellResult run_cell(const GroupData& group, const PreparedGroup& prep, ClassifierKind kind,
                    int n_features, const EvalOptions& opts) {
  CellResult cell;
  cell.group = group.group;
  cell.kind = kind;
  cell.n_features = n_features;
  cell.train_benign = prep.train_benign;
  cell.train_malicious = prep.train_malicious;
  cell.test_benign = prep.test_benign;
  cell.test_malicious = prep.test_malicious;

  if (!prep.ok) {
    cell.skip_reason = prep.skip_reason;
    return cell;
  }

  try {
    std::vector<std::uint8_t> features = top_n(prep.ranking, n_features);
    std::vector<std::uint16_t> feature_list(features.begin(), features.end());

    std::vector<FeatureVector> train_set;
    train_set.reserve(prep.split.train.size());
    for (std::size_t i : prep.split.train) {
      train_set.push_back(project(group.histograms[i], features, group.apps[i].label));
    }

    TrainedModel model =
        train(kind, train_set, opts.hyper,
              static_cast<std::int64_t>(cell_train_seed(opts.seed, group.group, kind, n_features)),
              std::move(feature_list));

    for (std::size_t i : prep.split.test) {
      FeatureVector x = project(group.histograms[i], features, std::nullopt);
      Label predicted = predict(model, x).label;
      Label actual = group.apps[i].label;
      if (actual == Label::kMalicious) {
        (predicted == Label::kMalicious ? cell.counts.tp : cell.counts.fn)++;
      } else {
        (predicted == Label::kBenign ? cell.counts.tn : cell.counts.fp)++;
      }
    }
    cell.ok = true;
    cell.accuracy = accuracy_percent(cell.counts);
    cell.tpr = tp_rate(cell.counts);
    cell.tnr = tn_rate(cell.counts);
  } catch (const Error& e) {
    cell.ok = false;
    cell.skip_reason = e.what();
  }
  return cell;
}

int kind_order(ClassifierKind k) { return static_cast<int>(k); }

}  // namespace

SplitResult split(std::span<const LabeledApp> bucket, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw InvalidSpec("test fraction must lie in (0,1)");
  }

  SplitResult result;
  Rng rng(spec.seed);

  if (spec.stratified) {
    auto ben = label_indices(bucket, Label::kBenign);
    auto mal = label_indices(bucket, Label::kMalicious);
    if (ben.size() < 2 || mal.size() < 2) {
      throw TooSmallForSplit("stratified split needs at least two apps per label (benign=" +
                             std::to_string(ben.size()) + ", malicious=" +
                             std::to_string(mal.size()) + ")");
    }
    split_pool(ben, spec.test_fraction, rng, result.train, result.test);
    split_pool(mal, spec.test_fraction, rng, result.train, result.test);
  } else {
    if (bucket.size() < 2) throw TooSmallForSplit("bucket holds fewer than two apps");
    std::vector<std::size_t> all(bucket.size());
    for (std::size_t i = 0; i < bucket.size(); ++i) all[i] = i;
    split_pool(all, spec.test_fraction, rng, result.train, result.test);
  }

  std::sort(result.train.begin(), result.train.end());
  std::sort(result.test.begin(), result.test.end());
  return result;
}

double accuracy_percent(const ConfusionCounts& c) {
  const std::uint64_t total = c.total();
  if (total == 0) return 0.0;
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total) * 100.0;
}

double tp_rate(const ConfusionCounts& c) {
  const std::uint64_t d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double tn_rate(const ConfusionCounts& c) {
  const std::uint64_t d = c.tn + c.fp;
  return d == 0 ? 0.0 : static_cast<double>(c.tn) / static_cast<double>(d);
}

std::uint64_t group_split_seed(std::uint64_t seed, GroupId group) {
  return Rng::mix({seed, Rng::hash_str(group_name(group)), 0x73706c6974ULL});  // "split"
}

std::uint64_t cell_train_seed(std::uint64_t seed, GroupId group, ClassifierKind kind, int n) {
  return Rng::mix({seed, Rng::hash_str(group_name(group)),
                   static_cast<std::uint64_t>(kind) + 1, static_cast<std::uint64_t>(n)});
}

CellResult evaluate_cell(const GroupData& group, ClassifierKind kind, int n_features,
                         const EvalOptions& opts) {
  PreparedGroup prep = prepare_group(group, opts);
  return run_cell(group, prep, kind, n_features, opts);
}

const CellResult* EvaluationReport::find(GroupId g, ClassifierKind k, int n) const {
  for (const CellResult& c : cells) {
    if (c.group == g && c.kind == k && c.n_features == n) return &c;
  }
  return nullptr;
}

std::optional<double> EvaluationReport::average_accuracy(ClassifierKind k, int n) const {
  double sum = 0.0;
  int count = 0;
  for (const CellResult& c : cells) {
    if (c.kind == k && c.n_features == n && c.ok) {
      sum += c.accuracy;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::vector<GroupBest> EvaluationReport::per_group_best() const {
  std::map<GroupId, const CellResult*> best;
  for (const CellResult& c : cells) {
    if (!c.ok) continue;
    auto [it, inserted] = best.emplace(c.group, &c);
    if (inserted) continue;
    const CellResult* cur = it->second;
    const bool better = c.accuracy > cur->accuracy ||
                        (c.accuracy == cur->accuracy &&
                         (c.n_features < cur->n_features ||
                          (c.n_features == cur->n_features &&
                           kind_order(c.kind) < kind_order(cur->kind))));
    if (better) it->second = &c;
  }
  std::vector<GroupBest> out;
  out.reserve(best.size());
  for (const auto& [g, c] : best) {
    out.push_back({g, c->kind, c->n_features, c->accuracy, c->tpr, c->tnr});
  }
  return out;
}

std::optional<double> EvaluationReport::overall_best_average() const {
  auto best = per_group_best();
  if (best.empty()) return std::nullopt;
  double sum = 0.0;
  for (const GroupBest& b : best) sum += b.accuracy;
  return sum / static_cast<double>(best.size());
}

EvaluationReport sweep(std::span<const GroupData> groups, const EvalOptions& opts) {
  std::vector<PreparedGroup> prepared(groups.size());
  parallel_for_indexed(groups.size(), opts.workers,
                       [&](std::size_t g) { prepared[g] = prepare_group(groups[g], opts); });

  struct Job {
    std::size_t group_index;
    ClassifierKind kind;
    int n;
  };
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (ClassifierKind kind : opts.kinds) {
      for (int n : opts.feature_counts) jobs.push_back({g, kind, n});
    }
  }

  EvaluationReport report;
  report.cells.resize(jobs.size());
  parallel_for_indexed(jobs.size(), opts.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    report.cells[j] = run_cell(groups[job.group_index], prepared[job.group_index], job.kind, job.n,
                               opts);
  });

  std::sort(report.cells.begin(), report.cells.end(), [](const CellResult& a, const CellResult& b) {
    if (a.group != b.group) return a.group < b.group;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.n_features < b.n_features;
  });
  return report;
}

}  // namespace dexsieve
