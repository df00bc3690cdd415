/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/geom.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace sitwatch
{

using geom::Vec3;

/// Nanoseconds since epoch.
using TimeNs = std::int64_t;

inline constexpr TimeNs kNsPerSecond = 1'000'000'000;

enum class Label
{
  NonSit = 0,
  Sit = 1,
};

std::string_view label_name(Label l) noexcept;

struct ImuSample
{
  TimeNs t = 0;
  Vec3 accel;                // m/s^2
  std::optional<Vec3> gyro;  // rad/s
};

/*
 * Timestamped accelerometer stream with optional gyroscope, stored as
 * parallel arrays (a 34 h recording at 100 Hz is 12M samples). `gyro` is
 * either empty or the same length as `t`.
 */
class ImuRecording
{
public:
  ImuRecording() = default;
  explicit ImuRecording(double nominal_rate_hz) : m_rate(nominal_rate_hz) {}

  /// Throws InvalidInput if `s.t` does not strictly increase, the accel is
  /// non-finite, or gyro presence differs from earlier samples.
  void push_back(const ImuSample& s);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return m_t.size(); }
  bool empty() const noexcept { return m_t.empty(); }
  bool has_gyro() const noexcept { return !m_gyro.empty(); }
  double nominal_rate() const noexcept { return m_rate; }
  void set_nominal_rate(double hz);

  ImuSample operator[](std::size_t i) const;

  const std::vector<TimeNs>& times() const noexcept { return m_t; }
  const std::vector<Vec3>& accel() const noexcept { return m_accel; }
  const std::vector<Vec3>& gyro() const noexcept { return m_gyro; }

private:
  double m_rate = 100.0;
  std::vector<TimeNs> m_t;
  std::vector<Vec3> m_accel;
  std::vector<Vec3> m_gyro;
};

/// Annotated interval [start_t, end_t).
struct LabelInterval
{
  TimeNs start_t = 0;
  TimeNs end_t = 0;
  Label label = Label::NonSit;

  friend bool operator==(const LabelInterval&, const LabelInterval&) = default;
};

/// Sorts by start and throws InvalidInput naming the first overlapping pair or
/// an empty interval.
void validate_intervals(std::vector<LabelInterval>& intervals);

} // namespace sitwatch
