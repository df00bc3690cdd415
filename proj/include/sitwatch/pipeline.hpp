/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/config.hpp"
#include "sitwatch/eval.hpp"
#include "sitwatch/imu.hpp"
#include "sitwatch/model.hpp"
#include "sitwatch/table.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sitwatch::pipeline
{

struct FeaturizeResult
{
  FeatureTable table;
  std::vector<std::string> log; // dropped windows and degenerate samples
  std::size_t windows_total = 0;
};

/// Window the recording, extract features in window order and, with labels,
/// attach majority labels. `group` tags every row (no commas).
FeaturizeResult featurize(const ImuRecording& rec, const std::vector<LabelInterval>* labels, const RunConfig& cfg,
                          const std::string& group = "rec");

/// Channel groups left after applying cfg's ablation flags to a table.
std::uint32_t ablated_groups(std::uint32_t available, const RunConfig& cfg);

model::Model train_model(const FeatureTable& table, const RunConfig& cfg);

/// k-fold (or holdout when cfg.holdout > 0, group folds when cfg.group_folds).
eval::EvalReport evaluate(const FeatureTable& table, const RunConfig& cfg);

struct WindowDecision
{
  std::size_t window = 0;
  TimeNs start_t = 0;
  TimeNs end_t = 0;
  double proba = 0.0;
  Label decision = Label::NonSit;
};

struct Estimate
{
  std::vector<WindowDecision> windows;
  double window_seconds = 0.0;
  double sitting_seconds = 0.0;
  std::size_t windows_total = 0;
  std::vector<std::string> log;
};

/// Featurise with the model's stored settings and classify every window.
/// Only the decision threshold is taken from `cfg`.
Estimate estimate(const model::Model& m, const ImuRecording& rec, const RunConfig& cfg);

/// RunConfig defaults overlaid with a model's or table's stored settings.
RunConfig config_from_settings(const std::vector<Setting>& settings, const RunConfig& base = {});

std::string format_estimate(const Estimate& e, const RunConfig& cfg);

/// Per-sample pitch/roll and rotation vectors with the temporal-hold tracker
/// threaded over the whole recording; angles in degrees.
void write_angles_csv(const ImuRecording& rec, std::ostream& out, const std::vector<std::string>& comments = {});

std::vector<std::string> echo_comments(const RunConfig& cfg);

} // namespace sitwatch::pipeline
