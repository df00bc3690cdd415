/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

// Command-line front end. Uses only the C interface of libsitwatch.

#include "sitwatch/sitwatch.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct Failure
{
  sw_status status;
  std::string message;
};

void check(sw_status s)
{
  if (s != SW_OK)
    throw Failure{s, sw_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter
{
  void operator()(T* p) const noexcept { Free(p); }
};

using Config = std::unique_ptr<sw_config, Deleter<sw_config, sw_config_free>>;
using Recording = std::unique_ptr<sw_recording, Deleter<sw_recording, sw_recording_free>>;
using Labels = std::unique_ptr<sw_labels, Deleter<sw_labels, sw_labels_free>>;
using Features = std::unique_ptr<sw_features, Deleter<sw_features, sw_features_free>>;
using ModelPtr = std::unique_ptr<sw_model, Deleter<sw_model, sw_model_free>>;
using Report = std::unique_ptr<sw_report, Deleter<sw_report, sw_report_free>>;
using EstimatePtr = std::unique_ptr<sw_estimate, Deleter<sw_estimate, sw_estimate_free>>;

template <typename Ptr, typename F>
Ptr make(F&& f)
{
  typename Ptr::pointer raw = nullptr;
  check(f(&raw));
  return Ptr(raw);
}

Recording load_recording(const std::string& path)
{
  return make<Recording>([&](sw_recording** o) { return sw_recording_load(path.c_str(), o); });
}

void print_log(const char* log)
{
  if (log && *log)
    std::fputs(log, stderr);
}

struct Options
{
  std::string config_file;
  std::vector<std::string> overrides; // key=value
  std::optional<std::uint64_t> seed;
};

// Precedence: defaults, then --config file, then --set, then dedicated flags.
Config build_config(const Options& opt, const std::vector<std::pair<std::string, std::string>>& flags)
{
  Config cfg = make<Config>([](sw_config** o) { return sw_config_new(o); });
  if (!opt.config_file.empty())
    check(sw_config_load_file(cfg.get(), opt.config_file.c_str()));
  for (const auto& kv : opt.overrides)
  {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Failure{SW_ERR_INVALID_ARGUMENT, "--set expects key=value, got '" + kv + "'"};
    check(sw_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  if (opt.seed)
    check(sw_config_set(cfg.get(), "seed", std::to_string(*opt.seed).c_str()));
  for (const auto& [k, v] : flags)
    check(sw_config_set(cfg.get(), k.c_str(), v.c_str()));
  check(sw_config_validate(cfg.get()));
  return cfg;
}

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Sitting detection from wrist-worn IMU recordings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sw_version()));

  Options opt;
  app.add_option("--config", opt.config_file, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--set", opt.overrides, "Config override key=value (repeatable)");
  app.add_option("--seed", opt.seed, "Seed for every randomised step");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic recording and labels from a scenario");
  std::string scenario, synth_rec, synth_labels;
  synth->add_option("scenario", scenario, "Scenario JSON")->required();
  synth->add_option("-o,--output", synth_rec, "Recording CSV")->required();
  synth->add_option("-l,--labels", synth_labels, "Labels CSV")->required();

  // angles
  auto* angles = app.add_subcommand("angles", "Dump per-sample pitch, roll and rotation vectors");
  std::string angles_rec, angles_out = "-";
  angles->add_option("recording", angles_rec, "Recording CSV")->required();
  angles->add_option("-o,--output", angles_out, "Output CSV (default stdout)");

  // featurize
  auto* featurize = app.add_subcommand("featurize", "Windowed features with majority labels");
  std::vector<std::string> feat_recs, feat_labels, feat_groups;
  std::string feat_out;
  bool feat_no_rotvec = false, feat_no_raw = false;
  featurize->add_option("recordings", feat_recs, "Recording CSV (repeatable)")->required();
  featurize->add_option("-l,--labels", feat_labels, "Labels CSV, one per recording");
  featurize->add_option("--subject", feat_groups, "Group id, one per recording (default: file stem)");
  featurize->add_option("-o,--output", feat_out, "Features CSV")->required();
  featurize->add_flag("--no-rotvec", feat_no_rotvec, "Drop rotation-vector features");
  featurize->add_flag("--no-raw", feat_no_raw, "Drop raw accel/gyro features");

  // train
  auto* train = app.add_subcommand("train", "Fit a boosted-tree classifier and serialise it");
  std::string train_in, train_out;
  bool train_no_rotvec = false, train_no_raw = false;
  train->add_option("features", train_in, "Features CSV")->required();
  train->add_option("-o,--output", train_out, "Model file")->required();
  train->add_flag("--no-rotvec", train_no_rotvec, "Drop rotation-vector features");
  train->add_flag("--no-raw", train_no_raw, "Drop raw accel/gyro features");

  // eval
  auto* eval = app.add_subcommand("eval", "Cross-validated metrics table");
  std::string eval_in, eval_out = "-", eval_format = "table";
  std::optional<int> eval_folds;
  std::optional<double> eval_holdout;
  bool eval_no_rotvec = false, eval_no_raw = false, eval_group = false;
  eval->add_option("features", eval_in, "Features CSV")->required();
  auto* folds_opt = eval->add_option("--folds", eval_folds, "Number of folds");
  eval->add_option("--holdout", eval_holdout, "Single split with this test fraction")->excludes(folds_opt);
  eval->add_flag("--no-rotvec", eval_no_rotvec, "Drop rotation-vector features");
  eval->add_flag("--no-raw", eval_no_raw, "Drop raw accel/gyro features");
  eval->add_flag("--group-folds", eval_group, "Keep each subject in one fold");
  eval->add_option("--format", eval_format, "table or json")->check(CLI::IsMember({"table", "json"}));
  eval->add_option("-o,--output", eval_out, "Output file (default stdout)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Predicted sitting time and per-window decisions");
  std::string est_rec, est_model, est_out = "-";
  estimate->add_option("recording", est_rec, "Recording CSV")->required();
  estimate->add_option("-m,--model", est_model, "Model file")->required();
  estimate->add_option("-o,--output", est_out, "Output CSV (default stdout)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForVersion& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    std::fprintf(stderr, "error: %s: %s\n", sw_status_name(SW_ERR_INVALID_ARGUMENT), e.what());
    return SW_ERR_INVALID_ARGUMENT;
  }

  try
  {
    using Flags = std::vector<std::pair<std::string, std::string>>;
    if (synth->parsed())
    {
      Config cfg = build_config(opt, {});
      sw_recording* rec = nullptr;
      sw_labels* labels = nullptr;
      double rate = 100.0;
      {
        // rate_hz from the effective config
        const std::string echo = sw_config_echo(cfg.get());
        const auto pos = echo.find("rate_hz=");
        if (pos != std::string::npos)
          rate = std::stod(echo.substr(pos + 8));
      }
      check(sw_synth_generate_file(scenario.c_str(), rate, &rec, &labels));
      Recording r(rec);
      Labels l(labels);
      check(sw_recording_save(r.get(), synth_rec.c_str()));
      check(sw_labels_save(l.get(), synth_labels.c_str()));
    }
    else if (angles->parsed())
    {
      Config cfg = build_config(opt, {});
      Recording r = load_recording(angles_rec);
      check(sw_angles_write_csv(r.get(), cfg.get(), angles_out.c_str()));
    }
    else if (featurize->parsed())
    {
      Flags flags;
      if (feat_no_rotvec)
        flags.emplace_back("ablate_rotvec", "true");
      if (feat_no_raw)
        flags.emplace_back("ablate_raw", "true");
      Config cfg = build_config(opt, flags);
      if (!feat_labels.empty() && feat_labels.size() != feat_recs.size())
        throw Failure{SW_ERR_INVALID_ARGUMENT, "featurize: give one --labels file per recording"};
      if (!feat_groups.empty() && feat_groups.size() != feat_recs.size())
        throw Failure{SW_ERR_INVALID_ARGUMENT, "featurize: give one --subject per recording"};
      Features all;
      for (std::size_t i = 0; i < feat_recs.size(); ++i)
      {
        Recording r = load_recording(feat_recs[i]);
        Labels l;
        if (!feat_labels.empty())
          l = make<Labels>([&](sw_labels** o) { return sw_labels_load(feat_labels[i].c_str(), o); });
        const std::string group =
            feat_groups.empty() ? std::filesystem::path(feat_recs[i]).stem().string() : feat_groups[i];
        Features f = make<Features>(
            [&](sw_features** o) { return sw_featurize(r.get(), l.get(), cfg.get(), group.c_str(), o); });
        print_log(sw_features_log(f.get()));
        if (!all)
          all = std::move(f);
        else
          check(sw_features_append(all.get(), f.get()));
      }
      check(sw_features_save(all.get(), feat_out.c_str()));
    }
    else if (train->parsed())
    {
      Flags flags;
      if (train_no_rotvec)
        flags.emplace_back("ablate_rotvec", "true");
      if (train_no_raw)
        flags.emplace_back("ablate_raw", "true");
      Config cfg = build_config(opt, flags);
      Features f = make<Features>([&](sw_features** o) { return sw_features_load(train_in.c_str(), o); });
      ModelPtr m = make<ModelPtr>([&](sw_model** o) { return sw_train(f.get(), cfg.get(), o); });
      check(sw_model_save(m.get(), train_out.c_str()));
    }
    else if (eval->parsed())
    {
      Flags flags;
      if (eval_folds)
        flags.emplace_back("folds", std::to_string(*eval_folds));
      if (eval_holdout)
        flags.emplace_back("holdout", format_double(*eval_holdout));
      if (eval_no_rotvec)
        flags.emplace_back("ablate_rotvec", "true");
      if (eval_no_raw)
        flags.emplace_back("ablate_raw", "true");
      if (eval_group)
        flags.emplace_back("group_folds", "true");
      Config cfg = build_config(opt, flags);
      Features f = make<Features>([&](sw_features** o) { return sw_features_load(eval_in.c_str(), o); });
      Report r = make<Report>([&](sw_report** o) { return sw_evaluate(f.get(), cfg.get(), o); });
      check(sw_report_write(r.get(), cfg.get(), eval_format.c_str(), eval_out.c_str()));
    }
    else if (estimate->parsed())
    {
      Config cfg = build_config(opt, {});
      Recording r = load_recording(est_rec);
      ModelPtr m = make<ModelPtr>([&](sw_model** o) { return sw_model_load(est_model.c_str(), o); });
      EstimatePtr e = make<EstimatePtr>([&](sw_estimate** o) { return sw_estimate_run(m.get(), r.get(), cfg.get(), o); });
      check(sw_estimate_write(e.get(), cfg.get(), est_out.c_str()));
      std::fprintf(stderr, "sitting_seconds=%s\n", format_double(sw_estimate_sitting_seconds(e.get())).c_str());
    }
  }
  catch (const Failure& f)
  {
    std::string msg = f.message;
    for (auto& c : msg)
      if (c == '\n' || c == '\r')
        c = ' ';
    std::fprintf(stderr, "error: %s: %s\n", sw_status_name(f.status), msg.c_str());
    return static_cast<int>(f.status);
  }
  catch (const std::exception& e)
  {
    std::fprintf(stderr, "error: %s: %s\n", sw_status_name(SW_ERR_INTERNAL), e.what());
    return SW_ERR_INTERNAL;
  }
  return 0;
}
