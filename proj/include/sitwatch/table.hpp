/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/features.hpp"
#include "sitwatch/imu.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sitwatch
{

using Setting = std::pair<std::string, std::string>;

struct FeatureRow
{
  std::size_t window = 0;
  TimeNs start_t = 0;
  TimeNs end_t = 0;
  std::string group; // recording or subject id
  bool gap = false;
  std::optional<Label> label;
  std::vector<double> values;
};

/// Windowed features of one or more recordings, all in one layout.
struct FeatureTable
{
  features::FeatureLayout layout;
  std::vector<Setting> settings; // featurisation echo
  std::vector<FeatureRow> rows;

  std::vector<features::FeatureVector> vectors() const;

  /// Rows with a label; throws InvalidInput if any row is unlabelled.
  std::vector<Label> labels() const;
  std::vector<std::string> groups() const;

  /// Restrict to a subset of the present channel groups. Column order is kept.
  FeatureTable select(std::uint32_t groups) const;

  /// Append another table with the same layout.
  void append(const FeatureTable& other);
};

} // namespace sitwatch
