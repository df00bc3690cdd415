/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/eval.hpp"

#include "sitwatch/error.hpp"
#include "sitwatch/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace sitwatch::eval
{
namespace
{

double ratio(std::size_t num, std::size_t den, bool& undefined)
{
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

MetricSummary summarize(const std::vector<double>& v)
{
  MetricSummary s;
  if (v.empty())
    return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1)
  {
    double ss = 0.0;
    for (double x : v)
      ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

bool has_both_classes(std::span<const Label> labels)
{
  const bool sit = std::find(labels.begin(), labels.end(), Label::Sit) != labels.end();
  const bool non = std::find(labels.begin(), labels.end(), Label::NonSit) != labels.end();
  return sit && non;
}

FoldResult run_fold(std::span<const features::FeatureVector> features, std::span<const Label> labels,
                    const features::FeatureLayout& layout, const std::vector<std::size_t>& fold_of,
                    std::size_t fold, const model::TrainConfig& cfg, double threshold)
{
  std::vector<features::FeatureVector> train_x;
  std::vector<Label> train_y;
  std::vector<std::size_t> test_idx;
  for (std::size_t i = 0; i < features.size(); ++i)
  {
    if (fold_of[i] == fold)
      test_idx.push_back(i);
    else
    {
      train_x.push_back(features[i]);
      train_y.push_back(labels[i]);
    }
  }

  FoldResult res;
  res.fold = fold;
  res.train_size = train_x.size();
  res.test_size = test_idx.size();
  if (test_idx.empty())
  {
    res.skipped = true;
    res.skip_reason = "empty test split";
    return res;
  }
  if (!has_both_classes(train_y))
  {
    res.skipped = true;
    res.skip_reason = "training split contains a single class";
    return res;
  }

  const model::Model m = model::train(train_x, train_y, cfg, layout);
  std::vector<Label> pred;
  std::vector<Label> truth;
  for (std::size_t i : test_idx)
  {
    pred.push_back(model::predict(m, features[i], threshold));
    truth.push_back(labels[i]);
  }
  res.metrics = compute_metrics(pred, truth);
  return res;
}

void finalize(EvalReport& r)
{
  std::vector<double> rec, prec, f1, acc;
  for (const auto& f : r.folds)
  {
    if (f.skipped)
      continue;
    rec.push_back(f.metrics.recall);
    prec.push_back(f.metrics.precision);
    f1.push_back(f.metrics.f1);
    acc.push_back(f.metrics.accuracy);
  }
  r.evaluated_folds = rec.size();
  r.recall = summarize(rec);
  r.precision = summarize(prec);
  r.f1 = summarize(f1);
  r.accuracy = summarize(acc);
}

void check_inputs(std::span<const features::FeatureVector> features, std::span<const Label> labels)
{
  if (features.size() != labels.size())
    throw Error(ErrorCode::InvalidInput, "features and labels differ in length");
  if (features.empty())
    throw Error(ErrorCode::InvalidInput, "no labelled windows to evaluate");
}

} // namespace

Label majority_label(TimeNs start_t, TimeNs end_t, std::span<const LabelInterval> intervals)
{
  TimeNs sit = 0;
  for (const auto& iv : intervals)
  {
    if (iv.label != Label::Sit)
      continue;
    const TimeNs lo = std::max(start_t, iv.start_t);
    const TimeNs hi = std::min(end_t, iv.end_t);
    if (hi > lo)
      sit += hi - lo;
  }
  // sit > duration / 2 without rounding.
  return 2 * sit > (end_t - start_t) ? Label::Sit : Label::NonSit;
}

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn)
{
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.recall = ratio(tp, tp + fn, m.recall_undefined);
  m.precision = ratio(tp, tp + fp, m.precision_undefined);
  bool acc_undefined = false;
  m.accuracy = ratio(tp + tn, m.total(), acc_undefined);
  // Harmonic mean of precision and recall, written on counts.
  m.f1 = ratio(2 * tp, 2 * tp + fp + fn, m.f1_undefined);
  return m;
}

Metrics compute_metrics(std::span<const Label> pred, std::span<const Label> truth)
{
  if (pred.size() != truth.size())
    throw Error(ErrorCode::InvalidInput, "compute_metrics: " + std::to_string(pred.size()) + " predictions for " +
                                             std::to_string(truth.size()) + " labels");
  if (pred.empty())
    throw Error(ErrorCode::InvalidInput, "compute_metrics: empty input");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
  {
    const bool p = pred[i] == Label::Sit;
    const bool t = truth[i] == Label::Sit;
    if (p && t)
      ++tp;
    else if (p)
      ++fp;
    else if (t)
      ++fn;
    else
      ++tn;
  }
  return metrics_from_counts(tp, fp, fn, tn);
}

std::vector<std::size_t> kfold_assignment(std::size_t n, std::size_t k, std::uint64_t seed)
{
  if (k < 2)
    throw Error(ErrorCode::InvalidArgument, "k-fold needs k >= 2");
  if (n < k)
    throw Error(ErrorCode::InvalidInput, "k-fold needs at least k items");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::size_t> fold_of(n);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f)
  {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i)
      fold_of[order[pos++]] = f;
  }
  return fold_of;
}

std::vector<std::size_t> group_kfold_assignment(std::span<const std::string> groups, std::size_t k,
                                                std::uint64_t seed)
{
  if (k < 2)
    throw Error(ErrorCode::InvalidArgument, "k-fold needs k >= 2");
  std::vector<std::string> unique(groups.begin(), groups.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < k)
    throw Error(ErrorCode::InvalidInput, "group k-fold needs at least k groups, found " + std::to_string(unique.size()));

  Rng rng(seed);
  rng.shuffle(unique);
  std::map<std::string, std::size_t> fold_of_group;
  for (std::size_t i = 0; i < unique.size(); ++i)
    fold_of_group[unique[i]] = i % k;

  std::vector<std::size_t> out;
  out.reserve(groups.size());
  for (const auto& g : groups)
    out.push_back(fold_of_group.at(g));
  return out;
}

EvalReport kfold_cv(std::span<const features::FeatureVector> features, std::span<const Label> labels,
                    const features::FeatureLayout& layout, std::size_t k, std::uint64_t seed,
                    const model::TrainConfig& cfg, double threshold,
                    std::optional<std::span<const std::string>> groups)
{
  check_inputs(features, labels);
  const auto fold_of = groups ? group_kfold_assignment(*groups, k, seed) : kfold_assignment(features.size(), k, seed);

  EvalReport r;
  r.protocol = groups ? "group_kfold" : "kfold";
  r.k = k;
  r.seed = seed;
  r.layout_version = layout.version;
  for (std::size_t f = 0; f < k; ++f)
    r.folds.push_back(run_fold(features, labels, layout, fold_of, f, cfg, threshold));
  finalize(r);
  return r;
}

EvalReport holdout(std::span<const features::FeatureVector> features, std::span<const Label> labels,
                   const features::FeatureLayout& layout, double test_frac, std::uint64_t seed,
                   const model::TrainConfig& cfg, double threshold)
{
  check_inputs(features, labels);
  if (!(test_frac > 0.0 && test_frac < 1.0))
    throw Error(ErrorCode::InvalidArgument, "holdout fraction must be in (0, 1)");

  const std::size_t n = features.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  const auto n_test = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(test_frac * static_cast<double>(n))), 1, n - 1);
  std::vector<std::size_t> fold_of(n, 1);
  for (std::size_t i = 0; i < n_test; ++i)
    fold_of[order[i]] = 0;

  EvalReport r;
  r.protocol = "holdout";
  r.k = 1;
  r.seed = seed;
  r.layout_version = layout.version;
  r.folds.push_back(run_fold(features, labels, layout, fold_of, 0, cfg, threshold));
  finalize(r);
  return r;
}

double sitting_time(std::span<const Label> pred, double window_seconds)
{
  const auto n = std::count(pred.begin(), pred.end(), Label::Sit);
  return static_cast<double>(n) * window_seconds;
}

double nonsitting_time(std::span<const Label> pred, double window_seconds)
{
  const auto n = std::count(pred.begin(), pred.end(), Label::NonSit);
  return static_cast<double>(n) * window_seconds;
}

std::string format_table(const EvalReport& r)
{
  std::ostringstream os;
  os << "protocol: " << r.protocol;
  if (r.protocol != "holdout")
    os << " (k=" << r.k << ")";
  os << "  seed: " << r.seed << "  layout: " << r.layout_version << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %9s %9s %9s %9s %6s %6s %6s %6s\n", "fold", "recall", "precision", "f1",
                "accuracy", "tp", "fp", "fn", "tn");
  os << line;
  for (const auto& f : r.folds)
  {
    if (f.skipped)
    {
      os << std::to_string(f.fold) << "        skipped: " << f.skip_reason << '\n';
      continue;
    }
    const Metrics& m = f.metrics;
    std::snprintf(line, sizeof line, "%-8zu %9.4f %9.4f %9.4f %9.4f %6zu %6zu %6zu %6zu\n", f.fold, m.recall,
                  m.precision, m.f1, m.accuracy, m.tp, m.fp, m.fn, m.tn);
    os << line;
  }
  std::snprintf(line, sizeof line, "%-8s %9.4f %9.4f %9.4f %9.4f\n", "mean", r.recall.mean, r.precision.mean,
                r.f1.mean, r.accuracy.mean);
  os << line;
  std::snprintf(line, sizeof line, "%-8s %9.4f %9.4f %9.4f %9.4f\n", "std", r.recall.std, r.precision.std, r.f1.std,
                r.accuracy.std);
  os << line;
  return os.str();
}

std::string format_json(const EvalReport& r)
{
  using nlohmann::ordered_json;
  auto metrics_json = [](const Metrics& m) {
    ordered_json j;
    j["recall"] = m.recall;
    j["precision"] = m.precision;
    j["f1"] = m.f1;
    j["accuracy"] = m.accuracy;
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    j["tn"] = m.tn;
    ordered_json undefined = ordered_json::array();
    if (m.recall_undefined)
      undefined.push_back("recall");
    if (m.precision_undefined)
      undefined.push_back("precision");
    if (m.f1_undefined)
      undefined.push_back("f1");
    j["undefined"] = undefined;
    return j;
  };
  auto summary_json = [](const MetricSummary& s) {
    ordered_json j;
    j["mean"] = s.mean;
    j["std"] = s.std;
    return j;
  };

  ordered_json j;
  j["protocol"] = r.protocol;
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["layout"] = r.layout_version;
  j["evaluated_folds"] = r.evaluated_folds;
  ordered_json folds = ordered_json::array();
  for (const auto& f : r.folds)
  {
    ordered_json fj;
    fj["fold"] = f.fold;
    fj["train_size"] = f.train_size;
    fj["test_size"] = f.test_size;
    fj["skipped"] = f.skipped;
    if (f.skipped)
      fj["skip_reason"] = f.skip_reason;
    else
      fj["metrics"] = metrics_json(f.metrics);
    folds.push_back(fj);
  }
  j["folds"] = folds;
  ordered_json summary;
  summary["recall"] = summary_json(r.recall);
  summary["precision"] = summary_json(r.precision);
  summary["f1"] = summary_json(r.f1);
  summary["accuracy"] = summary_json(r.accuracy);
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

} // namespace sitwatch::eval
