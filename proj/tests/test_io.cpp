/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/error.hpp"
#include "sitwatch/io.hpp"
#include "sitwatch/rng.hpp"

#include <doctest.h>

#include <sstream>

using namespace sitwatch;
using namespace sitwatch::io;

namespace
{
std::string error_of(auto&& f)
{
  try
  {
    f();
  }
  catch (const Error& e)
  {
    return std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return "";
}
} // namespace

TEST_SUITE("io")
{
  TEST_CASE("recording parse")
  {
    std::istringstream in("t_ns,ax,ay,az\n0,0.1,0.2,-9.8\n10000000,0.1,0.2,-9.7\n");
    const ImuRecording rec = read_recording_csv(in);
    CHECK(rec.size() == 2);
    CHECK_FALSE(rec.has_gyro());
    CHECK(rec[1].accel.z == -9.7);
    CHECK(rec.nominal_rate() == doctest::Approx(100.0));
  }

  TEST_CASE("recording errors name the line and the timestamps")
  {
    const std::string bad = error_of([] {
      std::istringstream in("t_ns,ax,ay,az\n0,0,0,-9.8\n10,abc,0,-9.8\n");
      read_recording_csv(in, "rec.csv");
    });
    CHECK(bad.find("parse_error") == 0);
    CHECK(bad.find("rec.csv:3") != std::string::npos);

    const std::string dup = error_of([] {
      std::istringstream in("t_ns,ax,ay,az\n5,0,0,-9.8\n5,0,0,-9.8\n");
      read_recording_csv(in);
    });
    CHECK(dup.find("timestamp 5 does not follow previous timestamp 5") != std::string::npos);

    CHECK(error_of([] {
            std::istringstream in("time,ax,ay,az\n");
            read_recording_csv(in);
          }).find("parse_error") == 0);
    CHECK(error_of([] { parse_recording_csv("/nonexistent/x.csv"); }).find("io_error") == 0);
  }

  TEST_CASE("recording round trip is lossless")
  {
    Rng rng(17);
    ImuRecording rec(100.0);
    TimeNs t = 1'700'000'000'000'000'000LL;
    for (int i = 0; i < 500; ++i)
    {
      t += 9'000'000 + static_cast<TimeNs>(rng.below(2'000'000));
      rec.push_back({t, {rng.normal() * 1e3, rng.normal() * 1e-7, rng.normal()}, Vec3{rng.normal(), 0.1, -0.0}});
    }
    std::stringstream ss;
    write_recording_csv(rec, ss, {"note"});
    const ImuRecording back = read_recording_csv(ss);
    REQUIRE(back.size() == rec.size());
    CHECK(back.times() == rec.times());
    CHECK(back.accel() == rec.accel());
    CHECK(back.gyro() == rec.gyro());
  }

  TEST_CASE("labels parse, round trip and errors")
  {
    constexpr TimeNs s = kNsPerSecond;
    std::istringstream in("start_ns,end_ns,label\n0,10000000000,sit\n10000000000,20000000000,nonsit\n");
    const auto labels = read_labels_csv(in);
    REQUIRE(labels.size() == 2);
    CHECK(labels[0] == LabelInterval{0, 10 * s, Label::Sit});
    std::stringstream ss;
    write_labels_csv(labels, ss);
    CHECK(read_labels_csv(ss) == labels);

    const std::string overlap = error_of([] {
      std::istringstream o("start_ns,end_ns,label\n0,10000000000,sit\n5000000000,15000000000,sit\n");
      read_labels_csv(o);
    });
    CHECK(overlap.find("overlap") != std::string::npos);
    CHECK(overlap.find("5000000000") != std::string::npos);
    const std::string token = error_of([] {
      std::istringstream o("start_ns,end_ns,label\n0,10,standing\n");
      read_labels_csv(o);
    });
    CHECK(token.find("standing") != std::string::npos);
  }

  TEST_CASE("features table round trip keeps layout, settings and values")
  {
    FeatureTable t;
    t.layout = features::make_layout(features::kGroupAccel);
    t.settings = {{"window_seconds", "30"}, {"rate_hz", "100"}};
    for (std::size_t w = 0; w < 3; ++w)
    {
      FeatureRow r;
      r.window = w;
      r.start_t = static_cast<TimeNs>(w) * 30 * kNsPerSecond;
      r.end_t = r.start_t + 30 * kNsPerSecond;
      r.group = "subj1";
      r.gap = w == 1;
      if (w != 2)
        r.label = w == 0 ? Label::Sit : Label::NonSit;
      for (std::size_t c = 0; c < t.layout.names.size(); ++c)
        r.values.push_back(0.1 * static_cast<double>(c) + 1.0 / 3.0 * static_cast<double>(w));
      t.rows.push_back(r);
    }
    std::stringstream ss;
    write_features_csv(t, ss);
    const std::string text = ss.str();
    const FeatureTable back = read_features_csv(ss);
    CHECK(back.layout.version == t.layout.version);
    CHECK(back.settings == t.settings);
    REQUIRE(back.rows.size() == 3);
    CHECK(back.rows[1].gap);
    CHECK_FALSE(back.rows[2].label.has_value());
    CHECK(back.rows[2].values == t.rows[2].values);
    std::stringstream again;
    write_features_csv(back, again);
    CHECK(again.str() == text);
  }

  TEST_CASE("features header must follow the layout")
  {
    const std::string bad = error_of([] {
      std::istringstream in("# sitwatch-features layout=sitwatch.features.v1:accel\nwindow,start_ns,end_ns,group,gap,label,"
                            "ay_fuzzy_entropy\n");
      read_features_csv(in);
    });
    CHECK(bad.find("layout_mismatch") == 0);
  }

  TEST_CASE("real formatting round trips")
  {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i)
    {
      const double v = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
      CHECK(std::stod(format_real(v)) == v);
    }
  }
}
