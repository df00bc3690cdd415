/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/imu.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sitwatch::synth
{

enum class Activity
{
  SitTyping,
  SitStill,
  StandStill,
  Walk,
  Gesture,
};

std::string_view activity_name(Activity a) noexcept;
Activity activity_from_name(std::string_view name);
/// sit_* activities are sitting, everything else is not.
Label activity_label(Activity a) noexcept;

/// Closed interval sampled uniformly per segment instance; lo == hi is a constant.
struct Range
{
  double lo = 0.0;
  double hi = 0.0;

  static Range fixed(double v) { return {v, v}; }
};

/// One scripted segment. Angles are radians.
struct SegmentSpec
{
  Activity activity = Activity::SitStill;
  Range duration_s;
  Range phi;
  Range theta;
  Range pose_jitter;  // stationary std of the pose random walk
  Range jitter_tau_s; // correlation time of the pose random walk
  Range dyn_accel_amp;
  Range dyn_accel_hz;
  std::optional<Range> noise_std; // overrides the scenario value
  std::optional<Vec3> dyn_dir;    // unit axis of the dynamic component; random per segment if unset
};

struct Scenario
{
  std::string name;
  std::vector<SegmentSpec> segments;
  double noise_std = 0.0; // m/s^2, white noise per axis
  std::uint64_t seed = 0;
  double gravity = 9.81;
  TimeNs start_ns = 0;
  int repeat = 1;       // the segment list is played this many times
  bool shuffle = false; // shuffle segment order independently in every repetition

  /// Throws InvalidInput for non-positive durations or negative amplitudes.
  void validate() const;
};

/// Concrete segment after sampling all ranges.
struct Segment
{
  Activity activity = Activity::SitStill;
  double duration_s = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double pose_jitter = 0.0;
  double jitter_tau_s = 1.0;
  double dyn_accel_amp = 0.0;
  double dyn_accel_hz = 0.0;
  double noise_std = 0.0;
  std::optional<Vec3> dyn_dir;
};

/*
 * Parse a JSON scenario. Schema (numbers may be given as [lo, hi] ranges
 * wherever a segment field is listed as "range"):
 *
 *   {
 *     "name": "benchmark_8h",           optional
 *     "seed": 7,                         required
 *     "noise_std": 0.05,                 m/s^2, default 0
 *     "gravity": 9.81,                   m/s^2, default 9.81
 *     "start_ns": 0,                     default 0
 *     "repeat": 1, "shuffle": false,
 *     "segments": [
 *       { "activity": "sit_typing",      sit_typing|sit_still|stand_still|walk|gesture
 *         "duration_s": range,           required
 *         "phi_deg": range, "theta_deg": range,
 *         "pose_jitter_deg": range, "jitter_tau_s": range,
 *         "dyn_accel_amp": range,        m/s^2
 *         "dyn_accel_hz": range,
 *         "noise_std": range,            optional per-segment override
 *         "dyn_dir": [x, y, z] }         fixed axis of both harmonics, normalised
 *     ]
 *   }
 *
 * Omitted segment fields take per-activity defaults (see activity_defaults).
 */
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

SegmentSpec activity_defaults(Activity a);

/// Deterministic list of concrete segments (repeats, shuffles and range draws).
std::vector<Segment> expand(const Scenario& sc);

struct SynthOutput
{
  ImuRecording recording;
  std::vector<LabelInterval> labels; // tiles the recording exactly
  std::vector<Segment> segments;
};

/*
 * Render the scenario at `rate` Hz. Per segment the orientation is the pose
 * mean plus an Ornstein-Uhlenbeck random walk per angle, accel is the watch-
 * frame gravity of that orientation plus a dynamic component (a sinusoid at
 * dyn_accel_hz with a jittered phase rate and amplitude envelope, plus a
 * second harmonic, on random directions) plus white noise. Segment boundaries
 * fall on sample instants and label intervals are [first sample, next
 * segment's first sample).
 */
SynthOutput generate(const Scenario& sc, double rate);

} // namespace sitwatch::synth
