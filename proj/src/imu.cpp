/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/imu.hpp"

#include "sitwatch/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sitwatch
{

std::string_view label_name(Label l) noexcept
{
  return l == Label::Sit ? "sit" : "nonsit";
}

void ImuRecording::set_nominal_rate(double hz)
{
  if (!(hz > 0.0) || !std::isfinite(hz))
    throw Error(ErrorCode::InvalidArgument, "nominal rate must be positive");
  m_rate = hz;
}

void ImuRecording::reserve(std::size_t n)
{
  m_t.reserve(n);
  m_accel.reserve(n);
}

void ImuRecording::push_back(const ImuSample& s)
{
  if (!m_t.empty() && s.t <= m_t.back())
    throw Error(ErrorCode::InvalidInput, "timestamps not strictly increasing: " + std::to_string(m_t.back()) +
                                             " followed by " + std::to_string(s.t));
  if (!geom::is_finite(s.accel))
    throw Error(ErrorCode::InvalidInput, "non-finite acceleration at t=" + std::to_string(s.t));
  if (!m_t.empty() && s.gyro.has_value() != has_gyro())
    throw Error(ErrorCode::InvalidInput, "gyro presence changes at t=" + std::to_string(s.t));
  if (s.gyro && !geom::is_finite(*s.gyro))
    throw Error(ErrorCode::InvalidInput, "non-finite gyro at t=" + std::to_string(s.t));

  m_t.push_back(s.t);
  m_accel.push_back(s.accel);
  if (s.gyro)
  {
    if (m_gyro.capacity() < m_t.capacity())
      m_gyro.reserve(m_t.capacity());
    m_gyro.push_back(*s.gyro);
  }
}

ImuSample ImuRecording::operator[](std::size_t i) const
{
  ImuSample s{m_t.at(i), m_accel[i], std::nullopt};
  if (has_gyro())
    s.gyro = m_gyro[i];
  return s;
}

void validate_intervals(std::vector<LabelInterval>& intervals)
{
  for (const auto& iv : intervals)
  {
    if (!(iv.start_t < iv.end_t))
      throw Error(ErrorCode::InvalidInput,
                  "label interval [" + std::to_string(iv.start_t) + ", " + std::to_string(iv.end_t) + ") is empty");
  }
  std::stable_sort(intervals.begin(), intervals.end(),
                   [](const LabelInterval& a, const LabelInterval& b) { return a.start_t < b.start_t; });
  for (std::size_t i = 1; i < intervals.size(); ++i)
  {
    const auto& a = intervals[i - 1];
    const auto& b = intervals[i];
    if (b.start_t < a.end_t)
      throw Error(ErrorCode::InvalidInput, "overlapping label intervals [" + std::to_string(a.start_t) + ", " +
                                               std::to_string(a.end_t) + ") and [" + std::to_string(b.start_t) +
                                               ", " + std::to_string(b.end_t) + ")");
  }
}

} // namespace sitwatch
