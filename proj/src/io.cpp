/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/io.hpp"

#include "sitwatch/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

namespace sitwatch::io
{
namespace
{

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;)
  {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos)
    {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

class CsvReader
{
public:
  CsvReader(std::istream& in, std::string source) : m_in(in), m_source(std::move(source)) {}

  /// Next data/header line, skipping comments and blank lines; false at EOF.
  bool next(std::string& line)
  {
    while (std::getline(m_in, line))
    {
      ++m_line;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line.empty())
        continue;
      if (line.front() == '#')
      {
        m_comments.push_back(line.substr(1));
        continue;
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::Parse) const
  {
    throw Error(code, m_source + ":" + std::to_string(m_line) + ": " + msg);
  }

  template <class T>
  T number(std::string_view field, const char* column) const
  {
    T v{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (field.empty() || res.ec != std::errc{} || res.ptr != last)
      fail(std::string("bad value '") + std::string(field) + "' in column " + column);
    return v;
  }

  std::size_t line_number() const noexcept { return m_line; }
  const std::vector<std::string>& comments() const noexcept { return m_comments; }

private:
  std::istream& m_in;
  std::string m_source;
  std::size_t m_line = 0;
  std::vector<std::string> m_comments;
};

std::ifstream open_in(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return in;
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments)
{
  for (const auto& c : comments)
    out << "# " << c << '\n';
}

Label parse_label(std::string_view s, const CsvReader& r)
{
  if (s == "sit")
    return Label::Sit;
  if (s == "nonsit")
    return Label::NonSit;
  r.fail("unknown label '" + std::string(s) + "' (expected sit or nonsit)");
}

} // namespace

std::string format_real(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ImuRecording read_recording_csv(std::istream& in, const std::string& source)
{
  CsvReader r(in, source);
  std::string line;
  if (!r.next(line))
    r.fail("missing header");
  bool gyro = false;
  if (line == "t_ns,ax,ay,az,gx,gy,gz")
    gyro = true;
  else if (line != "t_ns,ax,ay,az")
    r.fail("expected header 't_ns,ax,ay,az[,gx,gy,gz]'");
  const std::size_t cols = gyro ? 7 : 4;

  ImuRecording rec;
  TimeNs prev = 0;
  while (r.next(line))
  {
    const auto f = split(line);
    if (f.size() != cols)
      r.fail("expected " + std::to_string(cols) + " fields, got " + std::to_string(f.size()));
    ImuSample s;
    s.t = r.number<TimeNs>(f[0], "t_ns");
    s.accel = {r.number<double>(f[1], "ax"), r.number<double>(f[2], "ay"), r.number<double>(f[3], "az")};
    if (gyro)
      s.gyro = Vec3{r.number<double>(f[4], "gx"), r.number<double>(f[5], "gy"), r.number<double>(f[6], "gz")};
    if (!rec.empty() && s.t <= prev)
      r.fail("timestamp " + std::to_string(s.t) + " does not follow previous timestamp " + std::to_string(prev));
    if (!geom::is_finite(s.accel) || (s.gyro && !geom::is_finite(*s.gyro)))
      r.fail("non-finite sample");
    rec.push_back(s);
    prev = s.t;
  }

  // Nominal rate from the median sample spacing.
  if (rec.size() >= 2)
  {
    std::vector<TimeNs> dt(rec.size() - 1);
    const auto& t = rec.times();
    for (std::size_t i = 1; i < t.size(); ++i)
      dt[i - 1] = t[i] - t[i - 1];
    std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
    rec.set_nominal_rate(1e9 / static_cast<double>(dt[dt.size() / 2]));
  }
  return rec;
}

ImuRecording parse_recording_csv(const std::string& path)
{
  auto in = open_in(path);
  return read_recording_csv(in, path);
}

void write_recording_csv(const ImuRecording& rec, std::ostream& out, const std::vector<std::string>& comments)
{
  write_comments(out, comments);
  out << (rec.has_gyro() ? "t_ns,ax,ay,az,gx,gy,gz\n" : "t_ns,ax,ay,az\n");
  std::string line;
  const auto& t = rec.times();
  const auto& a = rec.accel();
  const auto& g = rec.gyro();
  for (std::size_t i = 0; i < rec.size(); ++i)
  {
    line = std::to_string(t[i]);
    for (double v : {a[i].x, a[i].y, a[i].z})
    {
      line += ',';
      line += format_real(v);
    }
    if (rec.has_gyro())
    {
      for (double v : {g[i].x, g[i].y, g[i].z})
      {
        line += ',';
        line += format_real(v);
      }
    }
    line += '\n';
    out << line;
  }
}

std::vector<LabelInterval> read_labels_csv(std::istream& in, const std::string& source)
{
  CsvReader r(in, source);
  std::string line;
  if (!r.next(line))
    r.fail("missing header");
  if (line != "start_ns,end_ns,label")
    r.fail("expected header 'start_ns,end_ns,label'");

  std::vector<LabelInterval> out;
  while (r.next(line))
  {
    const auto f = split(line);
    if (f.size() != 3)
      r.fail("expected 3 fields, got " + std::to_string(f.size()));
    LabelInterval iv;
    iv.start_t = r.number<TimeNs>(f[0], "start_ns");
    iv.end_t = r.number<TimeNs>(f[1], "end_ns");
    iv.label = parse_label(f[2], r);
    if (!(iv.start_t < iv.end_t))
      r.fail("interval end must be after its start");
    out.push_back(iv);
  }
  try
  {
    validate_intervals(out);
  }
  catch (const Error& e)
  {
    throw Error(ErrorCode::Parse, source + ": " + e.what());
  }
  return out;
}

std::vector<LabelInterval> parse_labels_csv(const std::string& path)
{
  auto in = open_in(path);
  return read_labels_csv(in, path);
}

void write_labels_csv(const std::vector<LabelInterval>& labels, std::ostream& out,
                      const std::vector<std::string>& comments)
{
  write_comments(out, comments);
  out << "start_ns,end_ns,label\n";
  for (const auto& iv : labels)
    out << iv.start_t << ',' << iv.end_t << ',' << label_name(iv.label) << '\n';
}

FeatureTable read_features_csv(std::istream& in, const std::string& source)
{
  CsvReader r(in, source);
  std::string line;
  if (!r.next(line))
    r.fail("missing header");

  FeatureTable table;
  std::string layout_version;
  for (const auto& c : r.comments())
  {
    std::istringstream cs(c);
    std::string word;
    cs >> word;
    if (word == "sitwatch-features")
    {
      std::string kv;
      cs >> kv;
      if (kv.rfind("layout=", 0) != 0)
        r.fail("malformed sitwatch-features comment");
      layout_version = kv.substr(7);
    }
    else if (word == "setting")
    {
      std::string kv;
      cs >> kv;
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        r.fail("malformed setting comment '" + c + "'");
      table.settings.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
  const std::string family = std::string(features::kLayoutFamily) + ":";
  if (layout_version.rfind(family, 0) != 0)
    r.fail("missing or unsupported feature layout (expected '" + family + "...')");
  try
  {
    table.layout = features::make_layout(features::groups_from_string(layout_version.substr(family.size())));
  }
  catch (const Error& e)
  {
    r.fail(e.what());
  }

  const auto header = split(line);
  const std::vector<std::string> fixed = {"window", "start_ns", "end_ns", "group", "gap", "label"};
  if (header.size() != fixed.size() + table.layout.size())
    r.fail("column count does not match layout " + table.layout.version, ErrorCode::LayoutMismatch);
  for (std::size_t i = 0; i < header.size(); ++i)
  {
    const std::string& want = i < fixed.size() ? fixed[i] : table.layout.names[i - fixed.size()];
    if (header[i] != want)
      r.fail("column " + std::to_string(i) + " is '" + std::string(header[i]) + "', layout expects '" + want + "'",
             ErrorCode::LayoutMismatch);
  }

  while (r.next(line))
  {
    const auto f = split(line);
    if (f.size() != header.size())
      r.fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    FeatureRow row;
    row.window = r.number<std::size_t>(f[0], "window");
    row.start_t = r.number<TimeNs>(f[1], "start_ns");
    row.end_t = r.number<TimeNs>(f[2], "end_ns");
    row.group = std::string(f[3]);
    row.gap = r.number<int>(f[4], "gap") != 0;
    if (!f[5].empty())
      row.label = parse_label(f[5], r);
    row.values.reserve(table.layout.size());
    for (std::size_t i = 0; i < table.layout.size(); ++i)
      row.values.push_back(r.number<double>(f[fixed.size() + i], table.layout.names[i].c_str()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

FeatureTable parse_features_csv(const std::string& path)
{
  auto in = open_in(path);
  return read_features_csv(in, path);
}

void write_features_csv(const FeatureTable& table, std::ostream& out)
{
  out << "# sitwatch-features layout=" << table.layout.version << '\n';
  for (const auto& [k, v] : table.settings)
    out << "# setting " << k << '=' << v << '\n';
  out << "window,start_ns,end_ns,group,gap,label";
  for (const auto& n : table.layout.names)
    out << ',' << n;
  out << '\n';
  for (const auto& row : table.rows)
  {
    out << row.window << ',' << row.start_t << ',' << row.end_t << ',' << row.group << ',' << (row.gap ? 1 : 0)
        << ',' << (row.label ? label_name(*row.label) : std::string_view{});
    for (double v : row.values)
      out << ',' << format_real(v);
    out << '\n';
  }
}

std::string read_file(const std::string& path)
{
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
  if (path == "-")
  {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << content;
  if (!out)
    throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

} // namespace sitwatch::io
