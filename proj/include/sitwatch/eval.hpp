/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/features.hpp"
#include "sitwatch/imu.hpp"
#include "sitwatch/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sitwatch::eval
{

/// Sit iff annotated sitting inside [start_t, end_t) strictly exceeds half the
/// duration. Unannotated time counts as non-sitting.
Label majority_label(TimeNs start_t, TimeNs end_t, std::span<const LabelInterval> intervals);

inline Label majority_label(const features::Window& w, std::span<const LabelInterval> intervals)
{
  return majority_label(w.start_t, w.end_t, intervals);
}

/// Confusion-matrix scores with sitting as the positive class. A ratio with a
/// zero denominator is reported as 0 and flagged.
struct Metrics
{
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  bool recall_undefined = false;
  bool precision_undefined = false;
  bool f1_undefined = false;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

/// Throws InvalidInput when lengths differ or are zero.
Metrics compute_metrics(std::span<const Label> pred, std::span<const Label> truth);

struct FoldResult
{
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  bool skipped = false;
  std::string skip_reason;
  Metrics metrics;
};

struct MetricSummary
{
  double mean = 0.0;
  double std = 0.0; // sample standard deviation across evaluated folds
};

struct EvalReport
{
  std::string protocol; // "kfold" or "holdout"
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string layout_version;
  std::vector<FoldResult> folds;
  MetricSummary recall;
  MetricSummary precision;
  MetricSummary f1;
  MetricSummary accuracy;
  std::size_t evaluated_folds = 0;
};

/// Fold of each of `n` items: seeded shuffle, then consecutive chunks whose
/// sizes differ by at most one.
std::vector<std::size_t> kfold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);

/// Fold per item when whole groups (e.g. subjects) must stay together: groups
/// are shuffled and dealt to folds round-robin. Needs at least k groups.
std::vector<std::size_t> group_kfold_assignment(std::span<const std::string> groups, std::size_t k,
                                                std::uint64_t seed);

/*
 * Train on k-1 folds and test on the remaining one, for every fold. A fold
 * whose training split lacks a class is reported as skipped. `groups`, when
 * given, switches to group-level folds.
 */
EvalReport kfold_cv(std::span<const features::FeatureVector> features, std::span<const Label> labels,
                    const features::FeatureLayout& layout, std::size_t k, std::uint64_t seed,
                    const model::TrainConfig& cfg, double threshold = 0.5,
                    std::optional<std::span<const std::string>> groups = std::nullopt);

/// Single seeded split with round(test_frac * n) test items.
EvalReport holdout(std::span<const features::FeatureVector> features, std::span<const Label> labels,
                   const features::FeatureLayout& layout, double test_frac, std::uint64_t seed,
                   const model::TrainConfig& cfg, double threshold = 0.5);

/// count(sit) * window_seconds.
double sitting_time(std::span<const Label> pred, double window_seconds);
double nonsitting_time(std::span<const Label> pred, double window_seconds);

/// Fixed-width table with columns fold, recall, precision, f1, accuracy.
std::string format_table(const EvalReport& r);
/// JSON object; metric field names are recall, precision, f1, accuracy.
std::string format_json(const EvalReport& r);

} // namespace sitwatch::eval
