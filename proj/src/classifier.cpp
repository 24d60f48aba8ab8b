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

#include "dexsieve/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "dexsieve/rng.hpp"

namespace dexsieve {

namespace {

constexpr double kMinGain = 1e-12;
constexpr double kVarianceFloor = 1e-9;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double entropy2(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t n = a + b;
  if (n == 0 || a == 0 || b == 0) return 0.0;
  const double pa = static_cast<double>(a) / static_cast<double>(n);
  const double pb = static_cast<double>(b) / static_cast<double>(n);
  return -(pa * std::log2(pa) + pb * std::log2(pb));
}

struct SplitChoice {
  bool found = false;
  int feature = -1;            // index into the candidate space (column)
  double threshold = 0.0;
  double gain_ratio = -1.0;
};

struct Column {
  // (value, label) pairs of the node's samples for one feature, value-sorted
  std::vector<std::pair<double, Label>> cells;
};

// Scans the midpoint thresholds of one sorted column; updates best in place.
void scan_column(const Column& col, int column_index, std::uint64_t node_ben,
                 std::uint64_t node_mal, double parent_entropy, int min_leaf, SplitChoice& best) {
  const std::size_t n = col.cells.size();
  const double dn = static_cast<double>(n);
  std::uint64_t left_ben = 0, left_mal = 0;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (col.cells[i].second == Label::kBenign) ++left_ben;
    else ++left_mal;

    if (col.cells[i].first == col.cells[i + 1].first) continue;  // not a boundary

    const std::uint64_t ln = left_ben + left_mal;
    const std::uint64_t rn = n - ln;
    if (ln < static_cast<std::uint64_t>(min_leaf) || rn < static_cast<std::uint64_t>(min_leaf)) {
      continue;
    }

    const double threshold = col.cells[i].first + (col.cells[i + 1].first - col.cells[i].first) / 2.0;
    const std::uint64_t right_ben = node_ben - left_ben;
    const std::uint64_t right_mal = node_mal - left_mal;

    const double pl = static_cast<double>(ln) / dn;
    const double pr = static_cast<double>(rn) / dn;
    const double gain =
        parent_entropy - pl * entropy2(left_ben, left_mal) - pr * entropy2(right_ben, right_mal);
    if (gain <= kMinGain) continue;
    const double split_info = -(pl * std::log2(pl) + pr * std::log2(pr));
    const double ratio = gain / split_info;

    if (!best.found || ratio > best.gain_ratio ||
        (ratio == best.gain_ratio &&
         (column_index < best.feature ||
          (column_index == best.feature && threshold < best.threshold)))) {
      best.found = true;
      best.feature = column_index;
      best.threshold = threshold;
      best.gain_ratio = ratio;
    }
  }
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const FeatureVector> data, int dim, int min_leaf, int nb_leaf_threshold,
              int max_depth, Rng* feature_rng, int features_per_split)
      : data_(data),
        dim_(dim),
        min_leaf_(min_leaf),
        nb_leaf_threshold_(nb_leaf_threshold),
        max_depth_(max_depth),
        feature_rng_(feature_rng),
        features_per_split_(features_per_split) {}

  DecisionTree build(std::vector<std::uint32_t> indices) {
    tree_.nodes.clear();
    grow(std::move(indices), 0);
    return std::move(tree_);
  }

 private:
  std::int32_t grow(std::vector<std::uint32_t> indices, int depth) {
    std::uint64_t ben = 0, mal = 0;
    for (std::uint32_t i : indices) {
      if (*data_[i].label == Label::kBenign) ++ben;
      else ++mal;
    }

    const bool nb_leaf = nb_leaf_threshold_ > 0 &&
                         indices.size() < static_cast<std::size_t>(nb_leaf_threshold_);
    const bool pure = ben == 0 || mal == 0;
    const bool depth_capped = max_depth_ > 0 && depth >= max_depth_;

    SplitChoice best;
    if (!nb_leaf && !pure && !depth_capped &&
        indices.size() >= 2 * static_cast<std::size_t>(min_leaf_)) {
      best = find_best_split(indices, ben, mal);
    }

    if (!best.found) return make_leaf(indices, ben, mal);

    std::vector<std::uint32_t> left_idx, right_idx;
    left_idx.reserve(indices.size());
    right_idx.reserve(indices.size());
    for (std::uint32_t i : indices) {
      if (data_[i].values[best.feature] <= best.threshold) left_idx.push_back(i);
      else right_idx.push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();

    const std::int32_t node_id = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[node_id].is_leaf = false;
    tree_.nodes[node_id].feature = static_cast<std::uint16_t>(best.feature);
    tree_.nodes[node_id].threshold = best.threshold;

    const std::int32_t left_id = grow(std::move(left_idx), depth + 1);
    tree_.nodes[node_id].left = left_id;
    const std::int32_t right_id = grow(std::move(right_idx), depth + 1);
    tree_.nodes[node_id].right = right_id;
    return node_id;
  }

  SplitChoice find_best_split(const std::vector<std::uint32_t>& indices, std::uint64_t ben,
                              std::uint64_t mal) {
    const double parent_entropy = entropy2(ben, mal);

    std::vector<int> candidates;
    if (feature_rng_ && features_per_split_ < dim_) {
      // partial Fisher-Yates draw of features_per_split_ distinct features,
      // then ascending order so the scan is deterministic
      std::vector<int> all(dim_);
      for (int f = 0; f < dim_; ++f) all[f] = f;
      for (int k = 0; k < features_per_split_; ++k) {
        std::size_t j = k + static_cast<std::size_t>(feature_rng_->below(dim_ - k));
        std::swap(all[k], all[j]);
      }
      candidates.assign(all.begin(), all.begin() + features_per_split_);
      std::sort(candidates.begin(), candidates.end());
    } else {
      candidates.resize(dim_);
      for (int f = 0; f < dim_; ++f) candidates[f] = f;
    }

    SplitChoice best;
    Column col;
    col.cells.reserve(indices.size());
    for (int f : candidates) {
      col.cells.clear();
      for (std::uint32_t i : indices) col.cells.emplace_back(data_[i].values[f], *data_[i].label);
      std::sort(col.cells.begin(), col.cells.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      scan_column(col, f, ben, mal, parent_entropy, min_leaf_, best);
    }
    return best;
  }

  std::int32_t make_leaf(const std::vector<std::uint32_t>& indices, std::uint64_t ben,
                         std::uint64_t mal) {
    const std::int32_t node_id = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    TreeNode& node = tree_.nodes[node_id];
    node.is_leaf = true;
    node.class_counts = {ben, mal};
    if (nb_leaf_threshold_ > 0) node.nb = fit_nb(indices, ben, mal);
    return node_id;
  }

  NbLeafStats fit_nb(const std::vector<std::uint32_t>& indices, std::uint64_t ben,
                     std::uint64_t mal) {
    NbLeafStats stats;
    const double n = static_cast<double>(indices.size());
    stats.priors = {static_cast<double>(ben) / n, static_cast<double>(mal) / n};
    stats.means.assign(dim_, {0.0, 0.0});
    stats.variances.assign(dim_, {kVarianceFloor, kVarianceFloor});

    const std::array<double, 2> counts = {static_cast<double>(ben), static_cast<double>(mal)};
    for (int f = 0; f < dim_; ++f) {
      std::array<double, 2> sum{};
      for (std::uint32_t i : indices) sum[static_cast<int>(*data_[i].label)] += data_[i].values[f];
      for (int c = 0; c < 2; ++c) {
        if (counts[c] > 0) stats.means[f][c] = sum[c] / counts[c];
      }
      std::array<double, 2> sq{};
      for (std::uint32_t i : indices) {
        const int c = static_cast<int>(*data_[i].label);
        const double d = data_[i].values[f] - stats.means[f][c];
        sq[c] += d * d;
      }
      for (int c = 0; c < 2; ++c) {
        if (counts[c] > 1) {
          stats.variances[f][c] = std::max(kVarianceFloor, sq[c] / (counts[c] - 1.0));
        }
      }
    }
    return stats;
  }

  std::span<const FeatureVector> data_;
  int dim_;
  int min_leaf_;
  int nb_leaf_threshold_;  // 0 disables NB leaves
  int max_depth_;
  Rng* feature_rng_;       // null = consider every feature
  int features_per_split_;
  DecisionTree tree_;
};

void validate_training_data(std::span<const FeatureVector> data, std::size_t dim) {
  if (data.empty()) throw SingleClassData("training data is empty");
  bool has_ben = false, has_mal = false;
  for (const FeatureVector& v : data) {
    if (!v.label) throw InconsistentDimensions("unlabeled vector in training data");
    if (v.values.size() != dim) {
      throw InconsistentDimensions("feature vector length " + std::to_string(v.values.size()) +
                                   " differs from " + std::to_string(dim));
    }
    if (*v.label == Label::kBenign) has_ben = true;
    else has_mal = true;
  }
  if (!has_ben || !has_mal) throw SingleClassData("training data holds a single class");
}

Prediction tree_predict(const DecisionTree& tree, const FeatureVector& x) {
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf) {
    node = (x.values[node->feature] <= node->threshold) ? &tree.nodes[node->left]
                                                        : &tree.nodes[node->right];
  }

  if (node->nb) {
    const NbLeafStats& nb = *node->nb;
    std::array<double, 2> log_post{};
    std::array<bool, 2> feasible{};
    for (int c = 0; c < 2; ++c) {
      if (nb.priors[c] <= 0.0) continue;
      feasible[c] = true;
      double lp = std::log(nb.priors[c]);
      for (std::size_t f = 0; f < x.values.size(); ++f) {
        const double var = nb.variances[f][c];
        const double d = x.values[f] - nb.means[f][c];
        lp += -0.5 * std::log(kTwoPi * var) - (d * d) / (2.0 * var);
      }
      log_post[c] = lp;
    }
    if (feasible[0] && feasible[1]) {
      const double m = std::max(log_post[0], log_post[1]);
      const double p0 = std::exp(log_post[0] - m);
      const double p1 = std::exp(log_post[1] - m);
      const double p_mal = p1 / (p0 + p1);
      // tie -> benign
      Label label = p_mal > 0.5 ? Label::kMalicious : Label::kBenign;
      return {label, label == Label::kMalicious ? p_mal : 1.0 - p_mal};
    }
    Label label = feasible[1] ? Label::kMalicious : Label::kBenign;
    return {label, 1.0};
  }

  const std::uint64_t ben = node->class_counts[0];
  const std::uint64_t mal = node->class_counts[1];
  const std::uint64_t n = ben + mal;
  const double p_mal = n == 0 ? 0.0 : static_cast<double>(mal) / static_cast<double>(n);
  Label label = p_mal > 0.5 ? Label::kMalicious : Label::kBenign;
  return {label, label == Label::kMalicious ? p_mal : 1.0 - p_mal};
}

}  // namespace

std::string_view label_name(Label l) { return l == Label::kBenign ? "benign" : "malicious"; }

std::optional<Label> label_from_name(std::string_view name) {
  if (name == "benign") return Label::kBenign;
  if (name == "malicious") return Label::kMalicious;
  return std::nullopt;
}

std::string_view classifier_kind_name(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::kTree: return "tree";
    case ClassifierKind::kForest: return "forest";
    case ClassifierKind::kNbTree: return "nbtree";
  }
  return "?";
}

std::optional<ClassifierKind> classifier_kind_from_name(std::string_view name) {
  if (name == "tree") return ClassifierKind::kTree;
  if (name == "forest") return ClassifierKind::kForest;
  if (name == "nbtree") return ClassifierKind::kNbTree;
  return std::nullopt;
}

double split_gain_ratio(std::span<const double> values, std::span<const Label> labels,
                        double threshold, int min_leaf) {
  std::uint64_t lb = 0, lm = 0, rb = 0, rm = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool left = values[i] <= threshold;
    if (labels[i] == Label::kBenign) (left ? lb : rb)++;
    else (left ? lm : rm)++;
  }
  const std::uint64_t ln = lb + lm, rn = rb + rm;
  if (ln < static_cast<std::uint64_t>(min_leaf) || rn < static_cast<std::uint64_t>(min_leaf)) {
    return -1.0;
  }
  const double n = static_cast<double>(ln + rn);
  const double pl = static_cast<double>(ln) / n;
  const double pr = static_cast<double>(rn) / n;
  const double gain =
      entropy2(lb + rb, lm + rm) - pl * entropy2(lb, lm) - pr * entropy2(rb, rm);
  if (gain <= kMinGain) return -1.0;
  const double split_info = -(pl * std::log2(pl) + pr * std::log2(pr));
  return gain / split_info;
}

TrainedModel train(ClassifierKind kind, std::span<const FeatureVector> data,
                   const Hyperparameters& hyper, std::int64_t seed,
                   std::vector<std::uint16_t> feature_list) {
  if (data.empty()) throw SingleClassData("training data is empty");
  const std::size_t dim = data[0].values.size();
  validate_training_data(data, dim);
  if (feature_list.empty()) {
    feature_list.resize(dim);
    for (std::size_t f = 0; f < dim; ++f) feature_list[f] = static_cast<std::uint16_t>(f);
  }
  if (feature_list.size() != dim) {
    throw InconsistentDimensions("feature list length differs from vector dimension");
  }

  TrainedModel model;
  model.kind = kind;
  model.feature_list = std::move(feature_list);
  model.hyper = hyper;
  model.train_seed = seed;

  std::vector<std::uint32_t> all(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) all[i] = static_cast<std::uint32_t>(i);

  switch (kind) {
    case ClassifierKind::kTree: {
      TreeBuilder builder(data, static_cast<int>(dim), hyper.min_leaf, 0, hyper.max_depth, nullptr,
                          0);
      model.trees.push_back(builder.build(all));
      break;
    }
    case ClassifierKind::kNbTree: {
      TreeBuilder builder(data, static_cast<int>(dim), hyper.min_leaf, hyper.nb_leaf_threshold,
                          hyper.max_depth, nullptr, 0);
      model.trees.push_back(builder.build(all));
      break;
    }
    case ClassifierKind::kForest: {
      const int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim))));
      model.trees.reserve(hyper.forest_trees);
      for (int t = 0; t < hyper.forest_trees; ++t) {
        // per-tree stream keyed by (seed, tree index): parallel and serial
        // schedules build identical forests
        Rng rng(Rng::mix({static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(t)}));
        std::vector<std::uint32_t> bootstrap(data.size());
        for (auto& b : bootstrap) b = static_cast<std::uint32_t>(rng.below(data.size()));
        TreeBuilder builder(data, static_cast<int>(dim), hyper.forest_min_leaf, 0, hyper.max_depth,
                            &rng, k);
        model.trees.push_back(builder.build(std::move(bootstrap)));
      }
      break;
    }
  }
  return model;
}

Prediction predict(const TrainedModel& model, const FeatureVector& x) {
  if (x.values.size() != model.feature_list.size()) {
    throw DimensionMismatch("vector length " + std::to_string(x.values.size()) +
                            " differs from model feature list " +
                            std::to_string(model.feature_list.size()));
  }

  if (model.kind != ClassifierKind::kForest) return tree_predict(model.trees[0], x);

  std::uint32_t votes_mal = 0;
  for (const DecisionTree& tree : model.trees) {
    if (tree_predict(tree, x).label == Label::kMalicious) ++votes_mal;
  }
  const std::uint32_t total = static_cast<std::uint32_t>(model.trees.size());
  const std::uint32_t votes_ben = total - votes_mal;
  Label label = votes_mal > votes_ben ? Label::kMalicious : Label::kBenign;  // tie -> benign
  const std::uint32_t votes = label == Label::kMalicious ? votes_mal : votes_ben;
  return {label, static_cast<double>(votes) / static_cast<double>(total)};
}

}  // namespace dexsieve
