/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/pipeline.hpp"

#include "sitwatch/error.hpp"
#include "sitwatch/features.hpp"
#include "sitwatch/io.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace sitwatch::pipeline
{

std::vector<std::string> echo_comments(const RunConfig& cfg)
{
  std::vector<std::string> out;
  std::string line = "config";
  for (const auto& [k, v] : cfg.echo())
    line += " " + k + "=" + v;
  out.push_back(line);
  return out;
}

FeaturizeResult featurize(const ImuRecording& rec, const std::vector<LabelInterval>* labels, const RunConfig& cfg,
                          const std::string& group)
{
  cfg.validate();
  if (group.empty() || group.find_first_of(",\n\r") != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "featurize: group id must be non-empty without commas or newlines");

  const features::FeatureConfig fc = cfg.feature_config();
  const auto seg = features::segment_windows(rec, cfg.window_seconds, cfg.rate_hz);

  FeaturizeResult res;
  res.windows_total = seg.windows.size();
  res.table.layout = features::make_layout(fc.groups(rec.has_gyro()));
  res.table.settings = cfg.feature_settings();

  for (const auto& w : seg.windows)
  {
    FeatureRow row;
    row.window = w.index;
    row.start_t = w.start_t;
    row.end_t = w.end_t;
    row.group = group;
    row.gap = w.has_gap;
    try
    {
      row.values = features::assemble_features(w, fc).values;
    }
    catch (const Error& e)
    {
      if (e.code() != ErrorCode::DegenerateInput)
        throw;
      res.log.push_back(std::string("dropped ") + e.what());
      continue;
    }
    if (labels)
      row.label = eval::majority_label(w, *labels);
    res.table.rows.push_back(std::move(row));
  }
  return res;
}

std::uint32_t ablated_groups(std::uint32_t available, const RunConfig& cfg)
{
  std::uint32_t g = available;
  if (cfg.ablate_rotvec)
    g &= ~static_cast<std::uint32_t>(features::kGroupRotVec);
  if (cfg.ablate_raw)
    g &= ~static_cast<std::uint32_t>(features::kGroupAccel | features::kGroupGyro);
  if (g == 0)
    throw Error(ErrorCode::InvalidArgument, "ablation leaves no feature groups");
  return g;
}

model::Model train_model(const FeatureTable& table, const RunConfig& cfg)
{
  cfg.validate();
  const FeatureTable t = table.select(ablated_groups(table.layout.groups, cfg));
  const auto x = t.vectors();
  const auto y = t.labels();
  model::Model m = model::train(x, y, cfg.train_config(), t.layout);
  m.feature_settings = t.settings;
  return m;
}

eval::EvalReport evaluate(const FeatureTable& table, const RunConfig& cfg)
{
  cfg.validate();
  const FeatureTable t = table.select(ablated_groups(table.layout.groups, cfg));
  const auto x = t.vectors();
  const auto y = t.labels();
  if (cfg.holdout > 0.0)
    return eval::holdout(x, y, t.layout, cfg.holdout, cfg.seed, cfg.train_config(), cfg.threshold);
  if (cfg.group_folds)
  {
    const auto groups = t.groups();
    return eval::kfold_cv(x, y, t.layout, static_cast<std::size_t>(cfg.folds), cfg.seed, cfg.train_config(),
                          cfg.threshold, std::span<const std::string>(groups));
  }
  return eval::kfold_cv(x, y, t.layout, static_cast<std::size_t>(cfg.folds), cfg.seed, cfg.train_config(),
                        cfg.threshold);
}

RunConfig config_from_settings(const std::vector<Setting>& settings, const RunConfig& base)
{
  RunConfig cfg = base;
  for (const auto& [k, v] : settings)
    cfg.set(k, v);
  return cfg;
}

Estimate estimate(const model::Model& m, const ImuRecording& rec, const RunConfig& cfg)
{
  RunConfig fcfg = config_from_settings(m.feature_settings);
  fcfg.threshold = cfg.threshold;

  const std::string family = std::string(features::kLayoutFamily) + ":";
  if (m.layout_version.rfind(family, 0) != 0)
    throw Error(ErrorCode::LayoutMismatch, "model layout '" + m.layout_version + "' is not a " +
                                               features::kLayoutFamily + " layout");
  const std::uint32_t groups = features::groups_from_string(m.layout_version.substr(family.size()));
  fcfg.ablate_rotvec = (groups & features::kGroupRotVec) == 0;
  fcfg.ablate_raw = (groups & features::kGroupAccel) == 0;

  FeaturizeResult fr = featurize(rec, nullptr, fcfg);
  const FeatureTable t = fr.table.select(groups);

  Estimate e;
  e.window_seconds = fcfg.window_seconds;
  e.windows_total = fr.windows_total;
  e.log = std::move(fr.log);
  std::vector<Label> decisions;
  for (const auto& fv : t.vectors())
  {
    const FeatureRow& row = t.rows[e.windows.size()];
    WindowDecision d;
    d.window = row.window;
    d.start_t = row.start_t;
    d.end_t = row.end_t;
    d.proba = model::predict_proba(m, fv);
    d.decision = d.proba >= fcfg.threshold ? Label::Sit : Label::NonSit;
    decisions.push_back(d.decision);
    e.windows.push_back(d);
  }
  e.sitting_seconds = eval::sitting_time(decisions, e.window_seconds);
  return e;
}

std::string format_estimate(const Estimate& e, const RunConfig& cfg)
{
  std::ostringstream os;
  for (const auto& c : echo_comments(cfg))
    os << "# " << c << '\n';
  os << "# sitting_seconds=" << io::format_real(e.sitting_seconds) << " windows=" << e.windows.size()
     << " window_seconds=" << io::format_real(e.window_seconds) << '\n';
  os << "window,start_ns,end_ns,proba_sit,decision\n";
  for (const auto& w : e.windows)
    os << w.window << ',' << w.start_t << ',' << w.end_t << ',' << io::format_real(w.proba) << ','
       << label_name(w.decision) << '\n';
  return os.str();
}

void write_angles_csv(const ImuRecording& rec, std::ostream& out, const std::vector<std::string>& comments)
{
  constexpr double kToDeg = 180.0 / std::numbers::pi;
  for (const auto& c : comments)
    out << "# " << c << '\n';
  out << "t_ns,phi_deg,theta_deg,near_singular,rx,ry,rz,status\n";

  std::optional<geom::EulerPR> prev;
  geom::RotationVector last;
  const auto& t = rec.times();
  const auto& a = rec.accel();
  std::string line;
  for (std::size_t i = 0; i < rec.size(); ++i)
  {
    line = std::to_string(t[i]);
    try
    {
      const geom::EulerPR raw = geom::estimate_pitch_roll(a[i]);
      const auto o = geom::orientation_from_gravity(a[i], prev);
      prev = o.angles;
      last = o.r;
      line += ',' + io::format_real(raw.phi * kToDeg) + ',' + io::format_real(raw.theta * kToDeg) + ',' +
              (raw.near_singular ? "1" : "0");
      line += ',' + io::format_real(last.rx) + ',' + io::format_real(last.ry) + ',' + io::format_real(last.rz) + ",ok";
    }
    catch (const Error& e)
    {
      if (e.code() != ErrorCode::DegenerateInput)
        throw;
      line += ",,,," + io::format_real(last.rx) + ',' + io::format_real(last.ry) + ',' + io::format_real(last.rz) +
              ",degenerate";
    }
    out << line << '\n';
  }
}

} // namespace sitwatch::pipeline
