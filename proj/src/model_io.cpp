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

// Model file layout (little-endian):
//   magic "DSVM" | u32 format version (1) | u8 kind | i64 train seed
//   u32 min_leaf | u32 forest_trees | u32 forest_min_leaf
//   u32 nb_leaf_threshold | u32 max_depth
//   u16 feature count | u16[count] opcode values
//   u32 tree count | trees
// tree:  u32 node count | nodes in storage order (root first)
// node:  u8 flags (bit0 leaf, bit1 nb table)
//   internal: u16 feature | f64 threshold | u32 left | u32 right
//   leaf:     u64 benign count | u64 malicious count
//             [nb: f64 prior x2, then per feature f64 mean x2, f64 var x2]

#include <cstring>

#include "dexsieve/classifier.hpp"

namespace dexsieve {

namespace {

constexpr char kMagic[4] = {'D', 'S', 'V', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

using Cursor = ByteCursor<CorruptModel>;

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(Bytes& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

double read_f64(Cursor& cur) {
  std::uint64_t bits = cur.u64();
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void put_tree(Bytes& out, const DecisionTree& tree, std::size_t feature_count) {
  put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
  for (const TreeNode& node : tree.nodes) {
    std::uint8_t flags = 0;
    if (node.is_leaf) flags |= 1;
    if (node.nb) flags |= 2;
    out.push_back(flags);
    if (!node.is_leaf) {
      put_u16(out, node.feature);
      put_f64(out, node.threshold);
      put_u32(out, static_cast<std::uint32_t>(node.left));
      put_u32(out, static_cast<std::uint32_t>(node.right));
      continue;
    }
    put_u64(out, node.class_counts[0]);
    put_u64(out, node.class_counts[1]);
    if (node.nb) {
      put_f64(out, node.nb->priors[0]);
      put_f64(out, node.nb->priors[1]);
      for (std::size_t f = 0; f < feature_count; ++f) {
        put_f64(out, node.nb->means[f][0]);
        put_f64(out, node.nb->means[f][1]);
        put_f64(out, node.nb->variances[f][0]);
        put_f64(out, node.nb->variances[f][1]);
      }
    }
  }
}

DecisionTree read_tree(Cursor& cur, std::size_t feature_count) {
  DecisionTree tree;
  std::uint32_t node_count = cur.u32();
  if (node_count == 0) throw CorruptModel("tree with zero nodes");
  tree.nodes.reserve(node_count);
  for (std::uint32_t i = 0; i < node_count; ++i) {
    std::uint8_t flags = cur.u8();
    if (flags > 3) throw CorruptModel("bad node flags");
    TreeNode node;
    node.is_leaf = (flags & 1) != 0;
    const bool has_nb = (flags & 2) != 0;
    if (!node.is_leaf) {
      if (has_nb) throw CorruptModel("nb table on internal node");
      node.feature = cur.u16();
      if (node.feature >= feature_count) throw CorruptModel("split feature outside feature list");
      node.threshold = read_f64(cur);
      node.left = static_cast<std::int32_t>(cur.u32());
      node.right = static_cast<std::int32_t>(cur.u32());
      if (node.left < 0 || node.right < 0 || node.left >= static_cast<std::int32_t>(node_count) ||
          node.right >= static_cast<std::int32_t>(node_count)) {
        throw CorruptModel("child index outside tree");
      }
    } else {
      node.class_counts[0] = cur.u64();
      node.class_counts[1] = cur.u64();
      if (has_nb) {
        NbLeafStats nb;
        nb.priors[0] = read_f64(cur);
        nb.priors[1] = read_f64(cur);
        nb.means.resize(feature_count);
        nb.variances.resize(feature_count);
        for (std::size_t f = 0; f < feature_count; ++f) {
          nb.means[f][0] = read_f64(cur);
          nb.means[f][1] = read_f64(cur);
          nb.variances[f][0] = read_f64(cur);
          nb.variances[f][1] = read_f64(cur);
        }
        node.nb = std::move(nb);
      }
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

}  // namespace

Bytes serialize_model(const TrainedModel& model) {
  Bytes out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(model.kind));
  put_u64(out, static_cast<std::uint64_t>(model.train_seed));
  put_u32(out, static_cast<std::uint32_t>(model.hyper.min_leaf));
  put_u32(out, static_cast<std::uint32_t>(model.hyper.forest_trees));
  put_u32(out, static_cast<std::uint32_t>(model.hyper.forest_min_leaf));
  put_u32(out, static_cast<std::uint32_t>(model.hyper.nb_leaf_threshold));
  put_u32(out, static_cast<std::uint32_t>(model.hyper.max_depth));
  put_u16(out, static_cast<std::uint16_t>(model.feature_list.size()));
  for (std::uint16_t f : model.feature_list) put_u16(out, f);
  put_u32(out, static_cast<std::uint32_t>(model.trees.size()));
  for (const DecisionTree& tree : model.trees) put_tree(out, tree, model.feature_list.size());
  return out;
}

TrainedModel deserialize_model(ByteView data) {
  Cursor cur(data, 0);
  ByteView magic = cur.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw CorruptModel("bad model magic");
  if (cur.u32() != kFormatVersion) throw CorruptModel("unsupported model format version");

  TrainedModel model;
  std::uint8_t kind = cur.u8();
  if (kind > 2) throw CorruptModel("unknown classifier kind tag");
  model.kind = static_cast<ClassifierKind>(kind);
  model.train_seed = static_cast<std::int64_t>(cur.u64());
  model.hyper.min_leaf = static_cast<int>(cur.u32());
  model.hyper.forest_trees = static_cast<int>(cur.u32());
  model.hyper.forest_min_leaf = static_cast<int>(cur.u32());
  model.hyper.nb_leaf_threshold = static_cast<int>(cur.u32());
  model.hyper.max_depth = static_cast<int>(cur.u32());

  std::uint16_t feature_count = cur.u16();
  model.feature_list.resize(feature_count);
  for (auto& f : model.feature_list) f = cur.u16();

  std::uint32_t tree_count = cur.u32();
  if (tree_count == 0) throw CorruptModel("model with zero trees");
  model.trees.reserve(tree_count);
  for (std::uint32_t t = 0; t < tree_count; ++t) {
    model.trees.push_back(read_tree(cur, feature_count));
  }
  if (cur.remaining() != 0) throw CorruptModel("trailing bytes after model payload");
  return model;
}

}  // namespace dexsieve
