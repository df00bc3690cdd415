/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/table.hpp"

#include "sitwatch/error.hpp"

namespace sitwatch
{

std::vector<features::FeatureVector> FeatureTable::vectors() const
{
  std::vector<features::FeatureVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back({r.window, layout.groups, layout.version, r.values});
  return out;
}

std::vector<Label> FeatureTable::labels() const
{
  std::vector<Label> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
  {
    if (!r.label)
      throw Error(ErrorCode::InvalidInput, "window " + std::to_string(r.window) + " of '" + r.group +
                                               "' has no label; featurize with a labels file");
    out.push_back(*r.label);
  }
  return out;
}

std::vector<std::string> FeatureTable::groups() const
{
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back(r.group);
  return out;
}

FeatureTable FeatureTable::select(std::uint32_t groups) const
{
  if ((groups & layout.groups) != groups)
    throw Error(ErrorCode::LayoutMismatch, "feature table (" + features::groups_to_string(layout.groups) +
                                               ") lacks requested channel groups " +
                                               features::groups_to_string(groups));
  FeatureTable out;
  out.layout = features::make_layout(groups);
  out.settings = settings;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < layout.size(); ++i)
  {
    if (groups & layout.column_group[i])
      keep.push_back(i);
  }
  out.rows.reserve(rows.size());
  for (const auto& r : rows)
  {
    FeatureRow nr = r;
    nr.values.clear();
    for (std::size_t i : keep)
      nr.values.push_back(r.values[i]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

void FeatureTable::append(const FeatureTable& other)
{
  if (rows.empty() && layout.names.empty())
  {
    *this = other;
    return;
  }
  if (other.layout.version != layout.version)
    throw Error(ErrorCode::LayoutMismatch,
                "cannot append layout '" + other.layout.version + "' to '" + layout.version + "'");
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

} // namespace sitwatch
