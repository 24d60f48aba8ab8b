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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dexsieve/common.hpp"

namespace dexsieve {

enum class Label : std::uint8_t { kBenign = 0, kMalicious = 1 };

std::string_view label_name(Label l);
std::optional<Label> label_from_name(std::string_view name);

enum class ClassifierKind : std::uint8_t { kTree = 0, kForest = 1, kNbTree = 2 };

std::string_view classifier_kind_name(ClassifierKind k);
std::optional<ClassifierKind> classifier_kind_from_name(std::string_view name);

// Opcode counts projected onto a selected feature list, in ranking order.
struct FeatureVector {
  std::vector<double> values;
  std::optional<Label> label;
};

struct Hyperparameters {
  int min_leaf = 2;            // smallest admissible child for tree/nb-tree splits
  int forest_trees = 100;      // B
  int forest_min_leaf = 1;     // forest trees grow essentially to purity
  int nb_leaf_threshold = 30;  // nb-tree nodes below this size become NB leaves
  int max_depth = 0;           // 0 = unlimited

  bool operator==(const Hyperparameters&) const = default;
};

// Gaussian naive-Bayes table held by nb-tree leaves.
struct NbLeafStats {
  std::array<double, 2> priors{};                 // indexed by Label
  std::vector<std::array<double, 2>> means;       // [feature][class]
  std::vector<std::array<double, 2>> variances;   // [feature][class]

  bool operator==(const NbLeafStats&) const = default;
};

struct TreeNode {
  bool is_leaf = true;
  std::uint16_t feature = 0;   // internal nodes: position in the feature list
  double threshold = 0.0;      // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::uint64_t, 2> class_counts{};  // leaves: training counts by label
  std::optional<NbLeafStats> nb;

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  bool operator==(const DecisionTree&) const = default;
};

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::kTree;
  std::vector<std::uint16_t> feature_list;  // opcode values, ranking order
  Hyperparameters hyper;
  std::int64_t train_seed = 0;
  std::vector<DecisionTree> trees;  // one for tree/nb-tree, B for forest

  bool operator==(const TrainedModel&) const = default;
};

struct Prediction {
  Label label = Label::kBenign;
  double score = 0.0;  // probability or vote share of the returned label
};

// Greedy gain-ratio trees over numeric thresholds (midpoints between sorted
// distinct values). Ties between splits break toward the lower feature index
// then the lower threshold, and every random draw derives from (seed,
// tree index), so the same inputs always build the same model.
//
// feature_list is attached to the model for provenance and serialization;
// when empty it defaults to 0..dim-1. Throws SingleClassData when only one
// label is present and InconsistentDimensions on ragged or unlabeled rows.
TrainedModel train(ClassifierKind kind, std::span<const FeatureVector> data,
                   const Hyperparameters& hyper, std::int64_t seed,
                   std::vector<std::uint16_t> feature_list = {});

// Routes through the tree(s); prediction ties break toward benign. Throws
// DimensionMismatch when x disagrees with the model's feature list.
Prediction predict(const TrainedModel& model, const FeatureVector& x);

// Versioned binary model format; round-trips structurally identical models.
Bytes serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(ByteView data);  // throws CorruptModel

// Split quality used by training; exposed so audits can recompute it.
// Returns gain ratio, or a negative value for inadmissible splits.
double split_gain_ratio(std::span<const double> values, std::span<const Label> labels,
                        double threshold, int min_leaf);

}  // namespace dexsieve
