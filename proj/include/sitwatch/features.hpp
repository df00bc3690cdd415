/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/descriptors.hpp"
#include "sitwatch/geom.hpp"
#include "sitwatch/imu.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sitwatch::features
{

/// Consecutive non-overlapping segment of a uniformly resampled recording.
/// The spans point into the owning Segmentation (or caller storage).
struct Window
{
  std::size_t index = 0;
  TimeNs start_t = 0;
  TimeNs end_t = 0; // exclusive
  double rate = 100.0;
  std::span<const Vec3> accel;
  std::span<const Vec3> gyro; // empty without gyro
  bool has_gap = false;       // a > 1 s input gap was held across

  std::size_t size() const noexcept { return accel.size(); }
  bool has_gyro() const noexcept { return !gyro.empty(); }
};

// Input gaps longer than this hold the last value instead of interpolating.
inline constexpr TimeNs kMaxInterpolationGapNs = kNsPerSecond;

/*
 * Resampled recording and its windows. Owns the uniform-grid samples the
 * windows view, so it is move-only.
 */
struct Segmentation
{
  double rate = 100.0;
  std::size_t samples_per_window = 0;
  TimeNs t0 = 0;
  std::size_t uniform_samples = 0;
  std::vector<Vec3> accel;
  std::vector<Vec3> gyro;
  std::vector<Window> windows;

  Segmentation() = default;
  Segmentation(Segmentation&&) noexcept = default;
  Segmentation& operator=(Segmentation&&) noexcept = default;
  Segmentation(const Segmentation&) = delete;
  Segmentation& operator=(const Segmentation&) = delete;
};

/// Timestamp of uniform-grid sample k.
TimeNs grid_time(TimeNs t0, std::size_t k, double rate) noexcept;

/*
 * Linear interpolation onto the grid t0 + k/rate spanning the recording,
 * then split into windows of round(window_seconds * rate) samples. The
 * trailing fragment is dropped; a recording shorter than one window yields
 * no windows.
 */
Segmentation segment_windows(const ImuRecording& rec, double window_seconds, double rate);

/// Component-wise median of the window's acceleration.
Vec3 median_gravity(const Window& w);

struct SmoothingConfig
{
  double smooth_seconds = 0.25; // centered moving-average width
  double seq_rate = 20.0;       // rotation-vector sequence rate, Hz
};

struct RotVecSequence
{
  std::vector<geom::RotationVector> vectors;
  double rate = 0.0;
  std::size_t degenerate_samples = 0; // samples that reused the previous vector
};

/// Sample indices kept when a window of `n` samples at `rate` is decimated to
/// `seq_rate`: floor(i * n / L) for i < L = round(n * seq_rate / rate).
std::vector<std::size_t> decimation_indices(std::size_t n, double rate, double seq_rate);

/// Centered moving average with an odd width of about smooth_seconds * rate
/// samples, truncated at the window edges, evaluated at `at` only.
std::vector<Vec3> smooth_accel(std::span<const Vec3> accel, double rate, double smooth_seconds,
                               std::span<const std::size_t> at);

/// Smooth, decimate and map every kept sample through the temporal-hold
/// orientation tracker, which starts fresh for each window.
RotVecSequence rotation_vector_sequence(const Window& w, const SmoothingConfig& cfg);

// Channel groups of a feature vector.
enum ChannelGroup : std::uint32_t
{
  kGroupAccel = 1u << 0,
  kGroupGyro = 1u << 1,
  kGroupRotVec = 1u << 2, // per-timestamp sequence plus median-gravity vector
};

inline constexpr const char* kLayoutFamily = "sitwatch.features.v1";

/// Descriptors per channel, in layout order.
inline constexpr std::array<const char*, 8> kDescriptorNames = {"fuzzy_entropy", "mean", "std", "max",
                                                                "min",           "iqr",  "mad", "energy"};

/*
 * Feature layout for a set of channel groups. Order is fixed:
 *   ax ay az | gx gy gz | rx ry rz   (8 descriptors each, kDescriptorNames order)
 *   median_rx median_ry median_rz    (rotation vector of the median gravity)
 * Absent groups are skipped, so any subset keeps the relative order of the
 * full layout and accel-only is a prefix of every layout containing accel.
 */
struct FeatureLayout
{
  std::uint32_t groups = 0;
  std::string version; // e.g. "sitwatch.features.v1:accel+rotvec"
  std::vector<std::string> names;
  std::vector<std::uint32_t> column_group;

  std::size_t size() const noexcept { return names.size(); }
};

FeatureLayout make_layout(std::uint32_t groups);
std::string groups_to_string(std::uint32_t groups);
std::uint32_t groups_from_string(const std::string& s);

struct FeatureVector
{
  std::size_t window = 0;
  std::uint32_t groups = 0;
  std::string layout_version;
  std::vector<double> values;
};

struct FeatureConfig
{
  SmoothingConfig smoothing;
  FuzzyEntropyParams entropy;
  bool ablate_rotvec = false;
  bool ablate_raw = false; // drops accel and gyro
  bool use_gyro = true;

  /// Groups produced for a window with or without gyro.
  std::uint32_t groups(bool window_has_gyro) const;
};

/// Fuzzy entropy, stat descriptors and energy of one channel, in layout order.
std::array<double, 8> channel_features(std::span<const double> series, std::span<const double> entropy_series,
                                       const FuzzyEntropyParams& params);

/*
 * Features of one window. Raw channels use every sample for the statistics
 * and the decimated samples (same grid as the rotation-vector sequence) for
 * fuzzy entropy. Throws DegenerateInput when the rotation-vector branch is
 * enabled and yields nothing (degenerate median gravity or no recoverable
 * sample).
 */
FeatureVector assemble_features(const Window& w, const FeatureConfig& cfg);

} // namespace sitwatch::features
