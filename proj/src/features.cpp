/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/features.hpp"

#include "sitwatch/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sitwatch::features
{
namespace
{

constexpr std::array<const char*, 3> kAxes = {"x", "y", "z"};

double component(const Vec3& v, std::size_t axis) noexcept
{
  return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

std::vector<double> extract(std::span<const Vec3> v, std::size_t axis)
{
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = component(v[i], axis);
  return out;
}

std::vector<double> pick(const std::vector<double>& series, std::span<const std::size_t> idx)
{
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[i] = series[idx[i]];
  return out;
}

Vec3 lerp(const Vec3& a, const Vec3& b, double f) noexcept
{
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.z + f * (b.z - a.z)};
}

void append(std::vector<double>& out, const std::array<double, 8>& f)
{
  out.insert(out.end(), f.begin(), f.end());
}

} // namespace

TimeNs grid_time(TimeNs t0, std::size_t k, double rate) noexcept
{
  return t0 + static_cast<TimeNs>(std::llround(static_cast<double>(k) * 1e9 / rate));
}

Segmentation segment_windows(const ImuRecording& rec, double window_seconds, double rate)
{
  if (rec.empty())
    throw Error(ErrorCode::InvalidArgument, "segment_windows: empty recording");
  if (!(window_seconds > 0.0) || !(rate > 0.0))
    throw Error(ErrorCode::InvalidArgument, "segment_windows: window_seconds and rate must be positive");

  const auto n_window = static_cast<std::size_t>(std::llround(window_seconds * rate));
  if (n_window == 0)
    throw Error(ErrorCode::InvalidArgument, "segment_windows: window shorter than one sample");

  const auto& t = rec.times();
  const TimeNs t0 = t.front();
  const TimeNs t_last = t.back();

  // Largest k with grid_time(k) <= t_last.
  auto count = static_cast<std::size_t>(std::floor(static_cast<double>(t_last - t0) * rate / 1e9)) + 1;
  while (count > 1 && grid_time(t0, count - 1, rate) > t_last)
    --count;
  while (grid_time(t0, count, rate) <= t_last)
    ++count;

  Segmentation seg;
  seg.rate = rate;
  seg.samples_per_window = n_window;
  seg.t0 = t0;
  seg.uniform_samples = count;

  const std::size_t n_windows = count / n_window;
  const std::size_t used = n_windows * n_window;
  seg.accel.resize(used);
  if (rec.has_gyro())
    seg.gyro.resize(used);
  std::vector<std::uint8_t> held(used, 0);

  const auto& acc = rec.accel();
  const auto& gyr = rec.gyro();
  std::size_t j = 0;
  for (std::size_t k = 0; k < used; ++k)
  {
    const TimeNs tk = grid_time(t0, k, rate);
    while (j + 1 < t.size() && t[j + 1] <= tk)
      ++j;
    if (t[j] == tk || j + 1 == t.size())
    {
      seg.accel[k] = acc[j];
      if (rec.has_gyro())
        seg.gyro[k] = gyr[j];
      continue;
    }
    const TimeNs gap = t[j + 1] - t[j];
    if (gap > kMaxInterpolationGapNs)
    {
      seg.accel[k] = acc[j];
      if (rec.has_gyro())
        seg.gyro[k] = gyr[j];
      held[k] = 1;
      continue;
    }
    const double f = static_cast<double>(tk - t[j]) / static_cast<double>(gap);
    seg.accel[k] = lerp(acc[j], acc[j + 1], f);
    if (rec.has_gyro())
      seg.gyro[k] = lerp(gyr[j], gyr[j + 1], f);
  }

  seg.windows.reserve(n_windows);
  for (std::size_t m = 0; m < n_windows; ++m)
  {
    Window w;
    w.index = m;
    w.rate = rate;
    w.start_t = grid_time(t0, m * n_window, rate);
    w.end_t = grid_time(t0, (m + 1) * n_window, rate);
    w.accel = std::span<const Vec3>(seg.accel).subspan(m * n_window, n_window);
    if (rec.has_gyro())
      w.gyro = std::span<const Vec3>(seg.gyro).subspan(m * n_window, n_window);
    w.has_gap = std::any_of(held.begin() + static_cast<std::ptrdiff_t>(m * n_window),
                            held.begin() + static_cast<std::ptrdiff_t>((m + 1) * n_window),
                            [](std::uint8_t h) { return h != 0; });
    seg.windows.push_back(w);
  }
  return seg;
}

Vec3 median_gravity(const Window& w)
{
  if (w.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "median_gravity: empty window");
  return {median(extract(w.accel, 0)), median(extract(w.accel, 1)), median(extract(w.accel, 2))};
}

std::vector<std::size_t> decimation_indices(std::size_t n, double rate, double seq_rate)
{
  if (!(seq_rate > 0.0) || !(rate > 0.0))
    throw Error(ErrorCode::InvalidArgument, "decimation: rates must be positive");
  if (seq_rate > rate)
    throw Error(ErrorCode::InvalidArgument, "decimation: sequence rate exceeds sampling rate");
  const auto len = static_cast<std::size_t>(std::llround(static_cast<double>(n) * seq_rate / rate));
  if (len == 0)
    throw Error(ErrorCode::InvalidArgument, "decimation: window too short for the sequence rate");

  std::vector<std::size_t> idx(len);
  for (std::size_t i = 0; i < len; ++i)
    idx[i] = i * n / len;
  return idx;
}

std::vector<Vec3> smooth_accel(std::span<const Vec3> accel, double rate, double smooth_seconds,
                               std::span<const std::size_t> at)
{
  if (!(smooth_seconds >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "smoothing width must be non-negative");
  auto width = std::max<long long>(1, std::llround(smooth_seconds * rate));
  if (width % 2 == 0)
    ++width;
  const auto half = static_cast<std::size_t>(width / 2);

  std::vector<Vec3> out(at.size());
  for (std::size_t i = 0; i < at.size(); ++i)
  {
    const std::size_t c = at[i];
    const std::size_t lo = c >= half ? c - half : 0;
    const std::size_t hi = std::min(accel.size() - 1, c + half);
    Vec3 sum;
    for (std::size_t k = lo; k <= hi; ++k)
      sum = sum + accel[k];
    out[i] = (1.0 / static_cast<double>(hi - lo + 1)) * sum;
  }
  return out;
}

RotVecSequence rotation_vector_sequence(const Window& w, const SmoothingConfig& cfg)
{
  if (w.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "rotation_vector_sequence: empty window");

  const auto idx = decimation_indices(w.size(), w.rate, cfg.seq_rate);
  const auto smoothed = smooth_accel(w.accel, w.rate, cfg.smooth_seconds, idx);

  RotVecSequence seq;
  seq.rate = static_cast<double>(idx.size()) * w.rate / static_cast<double>(w.size());
  seq.vectors.reserve(idx.size());

  std::optional<geom::EulerPR> prev;
  geom::RotationVector last;
  for (const Vec3& g : smoothed)
  {
    try
    {
      const auto o = geom::orientation_from_gravity(g, prev);
      prev = o.angles;
      last = o.r;
    }
    catch (const Error& e)
    {
      if (e.code() != ErrorCode::DegenerateInput)
        throw;
      ++seq.degenerate_samples;
    }
    seq.vectors.push_back(last);
  }
  return seq;
}

std::string groups_to_string(std::uint32_t groups)
{
  std::string s;
  auto add = [&](std::uint32_t bit, const char* name) {
    if (groups & bit)
    {
      if (!s.empty())
        s += '+';
      s += name;
    }
  };
  add(kGroupAccel, "accel");
  add(kGroupGyro, "gyro");
  add(kGroupRotVec, "rotvec");
  return s;
}

std::uint32_t groups_from_string(const std::string& s)
{
  std::uint32_t g = 0;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '+'))
  {
    if (tok == "accel")
      g |= kGroupAccel;
    else if (tok == "gyro")
      g |= kGroupGyro;
    else if (tok == "rotvec")
      g |= kGroupRotVec;
    else
      throw Error(ErrorCode::Parse, "unknown channel group '" + tok + "'");
  }
  if (g == 0)
    throw Error(ErrorCode::Parse, "empty channel group list");
  return g;
}

FeatureLayout make_layout(std::uint32_t groups)
{
  if (groups == 0 || (groups & ~(kGroupAccel | kGroupGyro | kGroupRotVec)) != 0)
    throw Error(ErrorCode::InvalidArgument, "feature layout needs at least one known channel group");

  FeatureLayout layout;
  layout.groups = groups;
  layout.version = std::string(kLayoutFamily) + ":" + groups_to_string(groups);

  auto add_channels = [&](std::uint32_t bit, char prefix) {
    if (!(groups & bit))
      return;
    for (const char* axis : kAxes)
    {
      for (const char* d : kDescriptorNames)
      {
        layout.names.push_back(std::string(1, prefix) + axis + "_" + d);
        layout.column_group.push_back(bit);
      }
    }
  };
  add_channels(kGroupAccel, 'a');
  add_channels(kGroupGyro, 'g');
  add_channels(kGroupRotVec, 'r');
  if (groups & kGroupRotVec)
  {
    for (const char* axis : kAxes)
    {
      layout.names.push_back(std::string("median_r") + axis);
      layout.column_group.push_back(kGroupRotVec);
    }
  }
  return layout;
}

std::uint32_t FeatureConfig::groups(bool window_has_gyro) const
{
  if (ablate_raw && ablate_rotvec)
    throw Error(ErrorCode::InvalidArgument, "cannot ablate both raw and rotation-vector features");
  std::uint32_t g = 0;
  if (!ablate_raw)
  {
    g |= kGroupAccel;
    if (use_gyro && window_has_gyro)
      g |= kGroupGyro;
  }
  if (!ablate_rotvec)
    g |= kGroupRotVec;
  return g;
}

std::array<double, 8> channel_features(std::span<const double> series, std::span<const double> entropy_series,
                                       const FuzzyEntropyParams& params)
{
  const StatDescriptors s = stat_descriptors(series);
  return {fuzzy_entropy(entropy_series, params), s.mean, s.std, s.max, s.min, s.iqr, s.mad, energy(series)};
}

FeatureVector assemble_features(const Window& w, const FeatureConfig& cfg)
{
  FeatureVector fv;
  fv.window = w.index;
  fv.groups = cfg.groups(w.has_gyro());
  fv.layout_version = std::string(kLayoutFamily) + ":" + groups_to_string(fv.groups);

  const auto idx = decimation_indices(w.size(), w.rate, cfg.smoothing.seq_rate);

  auto raw_group = [&](std::span<const Vec3> samples) {
    for (std::size_t axis = 0; axis < 3; ++axis)
    {
      const auto series = extract(samples, axis);
      append(fv.values, channel_features(series, pick(series, idx), cfg.entropy));
    }
  };

  if (fv.groups & kGroupAccel)
    raw_group(w.accel);
  if (fv.groups & kGroupGyro)
    raw_group(w.gyro);

  if (fv.groups & kGroupRotVec)
  {
    const RotVecSequence seq = rotation_vector_sequence(w, cfg.smoothing);
    if (seq.degenerate_samples == seq.vectors.size())
      throw Error(ErrorCode::DegenerateInput, "window " + std::to_string(w.index) +
                                                  ": no sample with recoverable orientation");
    std::array<std::vector<double>, 3> ch;
    for (auto& c : ch)
      c.reserve(seq.vectors.size());
    for (const auto& r : seq.vectors)
    {
      ch[0].push_back(r.rx);
      ch[1].push_back(r.ry);
      ch[2].push_back(r.rz);
    }
    for (const auto& c : ch)
      append(fv.values, channel_features(c, c, cfg.entropy));

    geom::RotationVector med;
    try
    {
      med = geom::rotation_vector_from_gravity(median_gravity(w), std::nullopt);
    }
    catch (const Error& e)
    {
      if (e.code() != ErrorCode::DegenerateInput)
        throw;
      throw Error(ErrorCode::DegenerateInput, "window " + std::to_string(w.index) + ": " + e.what());
    }
    fv.values.push_back(med.rx);
    fv.values.push_back(med.ry);
    fv.values.push_back(med.rz);
  }

  for (double v : fv.values)
  {
    if (!std::isfinite(v))
      throw Error(ErrorCode::Internal, "window " + std::to_string(w.index) + ": non-finite feature");
  }
  return fv;
}

} // namespace sitwatch::features
