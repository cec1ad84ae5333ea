/*
 * ThumbForge Video Thumbnail Library - Attractiveness scoring
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Random-forest regression over aesthetic vectors (supervised mode), the
 * stillness heuristic (unsupervised mode), and the THFOR01 model format.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "thumbforge/aesthetics.hpp"
#include "thumbforge/common.hpp"

namespace thumbforge {

struct TreeNode {
  std::uint16_t feature = 0;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double leaf_value = 0.0;
  std::uint8_t is_leaf = 1;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  double predict(const std::vector<double>& x) const {
    std::uint32_t at = 0;
    for (;;) {
      const TreeNode& node = nodes[at];
      if (node.is_leaf) return node.leaf_value;
      at = x[node.feature] <= node.threshold ? node.left : node.right;
    }
  }
};

struct TrainConfig {
  int n_trees = 100;
  int min_leaf = 5;
  int mtry = 0;        // candidate features per split; 0 = round(sqrt(dim))
  int max_depth = 0;   // 0 = unlimited
  bool bootstrap = true;
  std::uint64_t seed = 42;
};

struct ForestModel {
  std::uint32_t n_trees = 0;
  std::uint32_t feature_dim = 0;
  std::uint64_t seed = 0;
  std::vector<RegressionTree> trees;

  double predict(const std::vector<double>& x) const {
    if (x.size() != feature_dim) throw DimensionMismatch("predict: feature dimension");
    if (trees.empty()) throw ModelMissing("forest has no trees");
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict(x);
    return sum / static_cast<double>(trees.size());
  }
};

namespace detail {

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<double>& y;
  const TrainConfig& cfg;
  int dim;
  int mtry;
  Rng rng;
  RegressionTree tree;

  std::uint32_t build(std::vector<int> samples, int depth) {
    const std::uint32_t id = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.emplace_back();

    const double n = static_cast<double>(samples.size());
    double sum = 0.0, sum_sq = 0.0;
    for (const int i : samples) {
      sum += y[i];
      sum_sq += y[i] * y[i];
    }
    const double mean = sum / n;
    const double sse = sum_sq - sum * sum / n;

    const bool depth_capped = cfg.max_depth > 0 && depth >= cfg.max_depth;
    if (static_cast<int>(samples.size()) <= cfg.min_leaf || sse <= 1e-12 || depth_capped) {
      tree.nodes[id].leaf_value = mean;
      return id;
    }

    // Exact greedy variance-reduction split over mtry sampled features.
    int best_feature = -1;
    double best_threshold = 0.0, best_score = sse - 1e-12;
    const auto candidates = rng.sample_without_replacement(dim, mtry);
    std::vector<int> order;
    for (const std::size_t feature : candidates) {
      order = samples;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double va = x[a][feature], vb = x[b][feature];
        return va != vb ? va < vb : a < b;
      });
      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const double v = y[order[i]];
        left_sum += v;
        left_sq += v * v;
        const double cur = x[order[i]][feature];
        const double next = x[order[i + 1]][feature];
        if (cur == next) continue;
        const double nl = static_cast<double>(i + 1);
        const double nr = n - nl;
        const double right_sum = sum - left_sum;
        const double right_sq = sum_sq - left_sq;
        const double score = (left_sq - left_sum * left_sum / nl) +
                             (right_sq - right_sum * right_sum / nr);
        if (score < best_score) {
          best_score = score;
          best_feature = static_cast<int>(feature);
          best_threshold = 0.5 * (cur + next);
        }
      }
    }
    if (best_feature < 0) {
      tree.nodes[id].leaf_value = mean;
      return id;
    }

    std::vector<int> left, right;
    for (const int i : samples)
      (x[i][best_feature] <= best_threshold ? left : right).push_back(i);
    samples.clear();
    samples.shrink_to_fit();

    const std::uint32_t l = build(std::move(left), depth + 1);
    const std::uint32_t r = build(std::move(right), depth + 1);
    tree.nodes[id].is_leaf = 0;
    tree.nodes[id].feature = static_cast<std::uint16_t>(best_feature);
    tree.nodes[id].threshold = best_threshold;
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
  }
};

}  // namespace detail

// Bootstrap-aggregated regression trees. Each tree derives its own RNG
// stream from the master seed, so serial and parallel training produce
// identical models.
inline ForestModel train_forest(const std::vector<std::vector<double>>& x,
                                const std::vector<double>& y, const TrainConfig& cfg = {},
                                int threads = 0) {
  if (x.empty() || y.empty()) throw EmptyTrainingSet("train_forest: empty training set");
  if (x.size() != y.size()) throw DimensionMismatch("train_forest: |X| != |y|");
  if (x.size() < 2) throw EmptyTrainingSet("train_forest: need at least 2 samples");
  const int dim = static_cast<int>(x[0].size());
  for (const auto& row : x) {
    if (static_cast<int>(row.size()) != dim)
      throw DimensionMismatch("train_forest: ragged feature rows");
    for (const double v : row)
      if (!std::isfinite(v)) throw InvalidTrainingData("train_forest: non-finite feature");
  }
  for (const double v : y)
    if (!std::isfinite(v)) throw InvalidTrainingData("train_forest: non-finite target");

  ForestModel model;
  model.n_trees = static_cast<std::uint32_t>(cfg.n_trees);
  model.feature_dim = static_cast<std::uint32_t>(dim);
  model.seed = cfg.seed;
  model.trees.resize(cfg.n_trees);

  const int n = static_cast<int>(x.size());
  const int mtry = cfg.mtry > 0
                       ? std::min(cfg.mtry, dim)
                       : std::max(1, static_cast<int>(std::lround(std::sqrt(dim))));
  parallel_for(static_cast<std::size_t>(cfg.n_trees), threads, [&](std::size_t t) {
    detail::TreeBuilder builder{x, y, cfg, dim, mtry, Rng(derive_seed(cfg.seed, t)), {}};
    std::vector<int> samples(n);
    if (cfg.bootstrap) {
      for (int i = 0; i < n; ++i)
        samples[i] = static_cast<int>(builder.rng.uniform_index(n));
      std::sort(samples.begin(), samples.end());
    } else {
      std::iota(samples.begin(), samples.end(), 0);
    }
    builder.build(std::move(samples), 0);
    model.trees[t] = std::move(builder.tree);
  });
  return model;
}

// ---------------------------------------------------------------------------
// THFOR01 model format: magic, version u32, n_trees u32, feature_dim u32,
// seed u64, then per tree a node count u32 and packed nodes (feature u16,
// threshold f64, left u32, right u32, leaf_value f64, is_leaf u8). All
// little-endian.
// ---------------------------------------------------------------------------

inline constexpr char kForestMagic[7] = {'T', 'H', 'F', 'O', 'R', '0', '1'};
inline constexpr std::uint32_t kForestVersion = 1;

namespace detail {

template <typename T>
void write_le(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != sizeof(T)) throw CorruptNode("model file is truncated");
  return v;
}

}  // namespace detail

inline void save_model(const ForestModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write " + path);
  out.write(kForestMagic, sizeof(kForestMagic));
  detail::write_le<std::uint32_t>(out, kForestVersion);
  detail::write_le<std::uint32_t>(out, model.n_trees);
  detail::write_le<std::uint32_t>(out, model.feature_dim);
  detail::write_le<std::uint64_t>(out, model.seed);
  for (const auto& tree : model.trees) {
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& n : tree.nodes) {
      detail::write_le<std::uint16_t>(out, n.feature);
      detail::write_le<double>(out, n.threshold);
      detail::write_le<std::uint32_t>(out, n.left);
      detail::write_le<std::uint32_t>(out, n.right);
      detail::write_le<double>(out, n.leaf_value);
      detail::write_le<std::uint8_t>(out, n.is_leaf);
    }
  }
}

inline ForestModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path);
  char magic[sizeof(kForestMagic)];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || !std::equal(magic, magic + sizeof(magic), kForestMagic))
    throw BadMagic("not a THFOR01 model: " + path);
  const auto version = detail::read_le<std::uint32_t>(in);
  if (version != kForestVersion)
    throw VersionMismatch("model version " + std::to_string(version));
  ForestModel model;
  model.n_trees = detail::read_le<std::uint32_t>(in);
  model.feature_dim = detail::read_le<std::uint32_t>(in);
  model.seed = detail::read_le<std::uint64_t>(in);
  model.trees.resize(model.n_trees);
  for (auto& tree : model.trees) {
    const auto count = detail::read_le<std::uint32_t>(in);
    tree.nodes.resize(count);
    for (auto& n : tree.nodes) {
      n.feature = detail::read_le<std::uint16_t>(in);
      n.threshold = detail::read_le<double>(in);
      n.left = detail::read_le<std::uint32_t>(in);
      n.right = detail::read_le<std::uint32_t>(in);
      n.leaf_value = detail::read_le<double>(in);
      n.is_leaf = detail::read_le<std::uint8_t>(in);
      if (!n.is_leaf && (n.left >= count || n.right >= count))
        throw CorruptNode("child index out of range in " + path);
      if (!std::isfinite(n.threshold) || !std::isfinite(n.leaf_value))
        throw CorruptNode("non-finite node payload in " + path);
    }
    if (count == 0) throw CorruptNode("empty tree in " + path);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Keyframe scoring
// ---------------------------------------------------------------------------

enum class ScoreMode { unsupervised_stillness, supervised_forest };

struct ScoreTable {
  ScoreMode mode = ScoreMode::unsupervised_stillness;
  std::vector<double> scores;  // one per keyframe, same order as the input
};

// Unsupervised: the keyframe's stillness. Supervised: forest prediction on
// the keyframe's aesthetic vector. Scoring never filters keyframes.
inline ScoreTable score_keyframes(const std::vector<int>& keyframes, ScoreMode mode,
                                  const ForestModel* model,
                                  const std::vector<double>& stillness_by_frame,
                                  const std::vector<AestheticVector>& aesthetics_by_keyframe = {}) {
  ScoreTable table;
  table.mode = mode;
  table.scores.reserve(keyframes.size());
  if (mode == ScoreMode::unsupervised_stillness) {
    for (const int f : keyframes) table.scores.push_back(stillness_by_frame[f]);
    return table;
  }
  if (model == nullptr) throw ModelMissing("supervised scoring requires a model");
  if (aesthetics_by_keyframe.size() != keyframes.size())
    throw DimensionMismatch("need one aesthetic vector per keyframe");
  for (std::size_t i = 0; i < keyframes.size(); ++i)
    table.scores.push_back(model->predict(aesthetics_by_keyframe[i].vector));
  return table;
}

}  // namespace thumbforge
