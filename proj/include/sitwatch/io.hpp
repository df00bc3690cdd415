/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include "sitwatch/imu.hpp"
#include "sitwatch/table.hpp"

#include <iosfwd>
#include <string>
#include <vector>

/*
 * CSV formats. Lines starting with '#' before the column header are comments
 * (writers put the effective configuration there). Reals are written in the
 * shortest form that parses back to the same double.
 *
 *   recording:  t_ns,ax,ay,az[,gx,gy,gz]   integer ns, strictly increasing; m/s^2, rad/s
 *   labels:     start_ns,end_ns,label       label is sit or nonsit; no overlaps
 *   features:   window,start_ns,end_ns,group,gap,label,<layout names...>
 *               preceded by "# sitwatch-features layout=<version>" and
 *               "# setting <key>=<value>" lines; label may be empty
 */

namespace sitwatch::io
{

std::string format_real(double v);

ImuRecording read_recording_csv(std::istream& in, const std::string& source = "<stream>");
ImuRecording parse_recording_csv(const std::string& path);
void write_recording_csv(const ImuRecording& rec, std::ostream& out, const std::vector<std::string>& comments = {});

std::vector<LabelInterval> read_labels_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<LabelInterval> parse_labels_csv(const std::string& path);
void write_labels_csv(const std::vector<LabelInterval>& labels, std::ostream& out,
                      const std::vector<std::string>& comments = {});

FeatureTable read_features_csv(std::istream& in, const std::string& source = "<stream>");
FeatureTable parse_features_csv(const std::string& path);
void write_features_csv(const FeatureTable& table, std::ostream& out);

std::string read_file(const std::string& path);
/// "-" writes to stdout.
void write_file(const std::string& path, const std::string& content);

} // namespace sitwatch::io
