/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/config.hpp"

#include "sitwatch/error.hpp"
#include "sitwatch/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>

namespace sitwatch
{
namespace
{

template <class T>
T parse_number(const std::string& key, const std::string& value)
{
  T v{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw Error(ErrorCode::InvalidArgument, "config: bad value '" + value + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value)
{
  if (value == "true" || value == "1")
    return true;
  if (value == "false" || value == "0")
    return false;
  throw Error(ErrorCode::InvalidArgument, "config: bad boolean '" + value + "' for " + key);
}

std::string str(bool b) { return b ? "true" : "false"; }
std::string str(double v) { return io::format_real(v); }
std::string str(int v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }

} // namespace

void RunConfig::set(const std::string& key, const std::string& value)
{
  if (key == "window_seconds")
    window_seconds = parse_number<double>(key, value);
  else if (key == "rate_hz")
    rate_hz = parse_number<double>(key, value);
  else if (key == "seq_rate_hz")
    seq_rate_hz = parse_number<double>(key, value);
  else if (key == "smooth_seconds")
    smooth_seconds = parse_number<double>(key, value);
  else if (key == "use_gyro")
    use_gyro = parse_bool(key, value);
  else if (key == "ablate_rotvec")
    ablate_rotvec = parse_bool(key, value);
  else if (key == "ablate_raw")
    ablate_raw = parse_bool(key, value);
  else if (key == "fe_m_embed")
    entropy.m_embed = parse_number<int>(key, value);
  else if (key == "fe_r_tol_frac")
    entropy.r_tol_frac = parse_number<double>(key, value);
  else if (key == "fe_n_grad")
    entropy.n_grad = parse_number<int>(key, value);
  else if (key == "folds")
    folds = parse_number<int>(key, value);
  else if (key == "holdout")
    holdout = parse_number<double>(key, value);
  else if (key == "group_folds")
    group_folds = parse_bool(key, value);
  else if (key == "seed")
    seed = parse_number<std::uint64_t>(key, value);
  else if (key == "threshold")
    threshold = parse_number<double>(key, value);
  else if (key == "n_trees")
    train.n_trees = parse_number<int>(key, value);
  else if (key == "max_depth")
    train.max_depth = parse_number<int>(key, value);
  else if (key == "learning_rate")
    train.learning_rate = parse_number<double>(key, value);
  else if (key == "min_samples_leaf")
    train.min_samples_leaf = parse_number<int>(key, value);
  else if (key == "subsample_frac")
    train.subsample_frac = parse_number<double>(key, value);
  else if (key == "pos_weight")
    train.pos_weight = parse_number<double>(key, value);
  else if (key == "l2")
    train.l2 = parse_number<double>(key, value);
  else
    throw Error(ErrorCode::InvalidArgument, "config: unknown key '" + key + "'");
}

void RunConfig::load_json(const std::string& text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::Parse, "config: top level must be an object");
  for (const auto& [key, v] : j.items())
  {
    if (v.is_boolean())
      set(key, v.get<bool>() ? "true" : "false");
    else if (v.is_number_integer())
      set(key, v.dump());
    else if (v.is_number())
      set(key, io::format_real(v.get<double>()));
    else if (v.is_string())
      set(key, v.get<std::string>());
    else
      throw Error(ErrorCode::Parse, "config: '" + key + "' must be a scalar");
  }
}

void RunConfig::load_file(const std::string& path)
{
  load_json(io::read_file(path));
}

void RunConfig::validate() const
{
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, std::string("config: ") + name + " must be positive");
  };
  positive(window_seconds, "window_seconds");
  positive(rate_hz, "rate_hz");
  positive(seq_rate_hz, "seq_rate_hz");
  if (!(smooth_seconds >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "config: smooth_seconds must be >= 0");
  if (seq_rate_hz > rate_hz)
    throw Error(ErrorCode::InvalidArgument, "config: seq_rate_hz must not exceed rate_hz");
  if (ablate_raw && ablate_rotvec)
    throw Error(ErrorCode::InvalidArgument, "config: ablate_raw and ablate_rotvec are mutually exclusive");
  if (entropy.m_embed < 1 || entropy.n_grad < 1 || !(entropy.r_tol_frac > 0.0))
    throw Error(ErrorCode::InvalidArgument, "config: fuzzy-entropy parameters must be positive");
  if (folds < 2)
    throw Error(ErrorCode::InvalidArgument, "config: folds must be >= 2");
  if (!(holdout >= 0.0 && holdout < 1.0))
    throw Error(ErrorCode::InvalidArgument, "config: holdout must be in [0, 1)");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "config: threshold must be in [0, 1]");
  train.validate();
}

features::FeatureConfig RunConfig::feature_config() const
{
  features::FeatureConfig f;
  f.smoothing.smooth_seconds = smooth_seconds;
  f.smoothing.seq_rate = seq_rate_hz;
  f.entropy = entropy;
  f.ablate_raw = ablate_raw;
  f.ablate_rotvec = ablate_rotvec;
  f.use_gyro = use_gyro;
  return f;
}

model::TrainConfig RunConfig::train_config() const
{
  model::TrainConfig t = train;
  t.seed = seed;
  return t;
}

std::vector<Setting> RunConfig::feature_settings() const
{
  return {{"window_seconds", str(window_seconds)},
          {"rate_hz", str(rate_hz)},
          {"seq_rate_hz", str(seq_rate_hz)},
          {"smooth_seconds", str(smooth_seconds)},
          {"use_gyro", str(use_gyro)},
          {"fe_m_embed", str(entropy.m_embed)},
          {"fe_r_tol_frac", str(entropy.r_tol_frac)},
          {"fe_n_grad", str(entropy.n_grad)}};
}

std::vector<Setting> RunConfig::echo() const
{
  auto out = feature_settings();
  const std::vector<Setting> rest = {{"ablate_rotvec", str(ablate_rotvec)},
                                     {"ablate_raw", str(ablate_raw)},
                                     {"folds", str(folds)},
                                     {"holdout", str(holdout)},
                                     {"group_folds", str(group_folds)},
                                     {"seed", str(seed)},
                                     {"threshold", str(threshold)},
                                     {"n_trees", str(train.n_trees)},
                                     {"max_depth", str(train.max_depth)},
                                     {"learning_rate", str(train.learning_rate)},
                                     {"min_samples_leaf", str(train.min_samples_leaf)},
                                     {"subsample_frac", str(train.subsample_frac)},
                                     {"pos_weight", str(train.pos_weight)},
                                     {"l2", str(train.l2)}};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

} // namespace sitwatch
