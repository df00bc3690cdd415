/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/features.hpp"
#include "sitwatch/model.hpp"
#include "sitwatch/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sitwatch
{

/*
 * Effective settings of a run. Precedence is applied by the caller: start
 * from the defaults, apply a config file, then command-line flags.
 *
 * Keys accepted by set() (and in JSON config files):
 *   window_seconds rate_hz seq_rate_hz smooth_seconds use_gyro
 *   ablate_rotvec ablate_raw fe_m_embed fe_r_tol_frac fe_n_grad
 *   folds holdout group_folds seed threshold
 *   n_trees max_depth learning_rate min_samples_leaf subsample_frac pos_weight l2
 */
struct RunConfig
{
  double window_seconds = 30.0;
  double rate_hz = 100.0;
  double seq_rate_hz = 20.0;
  double smooth_seconds = 0.25;
  bool use_gyro = true;
  bool ablate_rotvec = false;
  bool ablate_raw = false;
  features::FuzzyEntropyParams entropy;
  int folds = 5;
  double holdout = 0.0; // > 0 selects a single holdout split of this test fraction
  bool group_folds = false;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  model::TrainConfig train;

  /// Throws InvalidArgument for an unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);

  /// Apply every key of a JSON object file.
  void load_file(const std::string& path);
  void load_json(const std::string& text);

  /// Throws InvalidArgument when the invariants fail.
  void validate() const;

  features::FeatureConfig feature_config() const;
  model::TrainConfig train_config() const; // train with seed applied

  /// Featurisation keys only (stored in feature tables and models).
  std::vector<Setting> feature_settings() const;
  /// Every key, fixed order.
  std::vector<Setting> echo() const;
};

} // namespace sitwatch
