/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/features.hpp"
#include "sitwatch/imu.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sitwatch::model
{

struct TrainConfig
{
  int n_trees = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  double subsample_frac = 0.8;
  std::uint64_t seed = 42;
  double pos_weight = 1.0; // weight of sit rows in the loss
  double l2 = 1.0;         // leaf-value regularisation

  void validate() const;
};

/// Internal node when feature >= 0 (x[feature] <= threshold goes left), leaf otherwise.
struct TreeNode
{
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct Tree
{
  std::vector<TreeNode> nodes; // nodes[0] is the root

  double leaf_value(std::span<const double> x) const;
  int depth() const;
};

struct Model
{
  std::vector<Tree> trees;
  double base_score = 0.0; // log-odds
  std::string layout_version;
  std::vector<std::string> feature_names;
  TrainConfig config;
  // Featurisation settings the model was trained with, echoed as key=value.
  std::vector<std::pair<std::string, std::string>> feature_settings;

  /// base_score + learning_rate * sum of leaf values.
  double raw_score(std::span<const double> x) const;
};

struct TrainTrace
{
  std::vector<double> loss; // weighted mean logistic loss, [0] before the first tree
  std::vector<std::vector<int>> leaf_rows; // per tree: in-sample row count of each leaf node (-1 internal)
};

/*
 * Gradient boosting of depth-limited regression trees on logistic loss.
 *
 * Each round fits a tree to the gradients of a seeded subsample with exact
 * greedy splits (second-order gain, ties to the lowest feature index then the
 * lowest threshold) and Newton leaf values -G/(H + l2). Every leaf value is
 * then halved until that leaf's loss over all training rows does not
 * increase, which makes the training loss non-increasing per round.
 *
 * Throws DegenerateTraining for a single class, InvalidInput for NaN features
 * (naming the window), LayoutMismatch for vectors of different layouts and
 * InvalidArgument for bad sizes or config.
 */
Model train(std::span<const features::FeatureVector> features, std::span<const Label> labels,
            const TrainConfig& cfg, const features::FeatureLayout& layout, TrainTrace* trace = nullptr);

/// Throws LayoutMismatch unless `f` carries the model's layout.
double predict_proba(const Model& m, const features::FeatureVector& f);

/// Sit iff predict_proba >= threshold.
Label predict(const Model& m, const features::FeatureVector& f, double threshold = 0.5);

inline constexpr const char* kModelMagic = "sitwatch-model";
inline constexpr int kModelFormatVersion = 1;

std::string serialize(const Model& m);

/// Throws Parse on malformed text.
Model deserialize(const std::string& text);

double sigmoid(double x) noexcept;

} // namespace sitwatch::model
