/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/error.hpp"
#include "sitwatch/features.hpp"
#include "sitwatch/geom.hpp"
#include "sitwatch/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sitwatch;
using namespace sitwatch::synth;

namespace
{
constexpr double kDeg = std::numbers::pi / 180.0;

Scenario quiet(Activity a, double seconds, double phi_deg, double theta_deg)
{
  SegmentSpec s = activity_defaults(a);
  s.duration_s = Range::fixed(seconds);
  s.phi = Range::fixed(phi_deg * kDeg);
  s.theta = Range::fixed(theta_deg * kDeg);
  s.pose_jitter = Range::fixed(0);
  s.dyn_accel_amp = Range::fixed(0);
  Scenario sc;
  sc.seed = 1;
  sc.segments = {s};
  return sc;
}
} // namespace

TEST_SUITE("synth")
{
  TEST_CASE("still standing pose gives constant -g")
  {
    const SynthOutput out = generate(quiet(Activity::StandStill, 2.0, 0, 0), 100.0);
    REQUIRE(out.recording.size() == 200);
    for (const auto& a : out.recording.accel())
    {
      CHECK(a.x == 0.0);
      CHECK(a.y == 0.0);
      CHECK(a.z == -9.81);
    }
    REQUIRE(out.labels.size() == 1);
    CHECK(out.labels[0].label == Label::NonSit);
  }

  TEST_CASE("noiseless pipeline recovers segment poses from window medians")
  {
    Scenario sc = quiet(Activity::SitStill, 60.0, -70, 12);
    SegmentSpec b = sc.segments[0];
    b.activity = Activity::StandStill;
    b.phi = Range::fixed(15 * kDeg);
    b.theta = Range::fixed(-30 * kDeg);
    sc.segments.push_back(b);
    const SynthOutput out = generate(sc, 100.0);
    const auto seg = features::segment_windows(out.recording, 30.0, 100.0);
    REQUIRE(seg.windows.size() == 4);
    const double want[4][2] = {{-70, 12}, {-70, 12}, {15, -30}, {15, -30}};
    for (std::size_t i = 0; i < 4; ++i)
    {
      const geom::EulerPR e = geom::estimate_pitch_roll(features::median_gravity(seg.windows[i]));
      CHECK(std::fabs(e.phi - want[i][0] * kDeg) < 1e-6);
      CHECK(std::fabs(e.theta - want[i][1] * kDeg) < 1e-6);
    }
  }

  TEST_CASE("labels tile the recording and follow activities")
  {
    Scenario sc;
    sc.seed = 3;
    sc.noise_std = 0.05;
    sc.repeat = 3;
    sc.shuffle = true;
    for (Activity a : {Activity::SitTyping, Activity::Walk, Activity::Gesture, Activity::SitStill})
    {
      SegmentSpec s = activity_defaults(a);
      s.duration_s = {10.3, 40.7};
      sc.segments.push_back(s);
    }
    const SynthOutput out = generate(sc, 100.0);
    REQUIRE(out.labels.size() == 12);
    CHECK(out.labels.front().start_t == out.recording.times().front());
    for (std::size_t i = 1; i < out.labels.size(); ++i)
      CHECK(out.labels[i].start_t == out.labels[i - 1].end_t);
    CHECK(out.labels.back().end_t == out.recording.times().back() + 10'000'000);
    for (std::size_t i = 0; i < out.labels.size(); ++i)
      CHECK(out.labels[i].label == activity_label(out.segments[i].activity));
  }

  TEST_CASE("desk and hanging poses are well separated in rotation-vector space")
  {
    auto median_r = [](const Scenario& sc) {
      const SynthOutput out = generate(sc, 100.0);
      const auto seg = features::segment_windows(out.recording, 30.0, 100.0);
      return geom::rotation_vector_from_gravity(features::median_gravity(seg.windows[0]), std::nullopt);
    };
    const auto sit = median_r(quiet(Activity::SitTyping, 30.0, -90, 3));
    const auto stand = median_r(quiet(Activity::StandStill, 30.0, 0, 0));
    CHECK(geom::norm(sit.as_vec3() - stand.as_vec3()) >= 0.5);
  }

  TEST_CASE("same seed reproduces, other seed differs")
  {
    Scenario sc;
    sc.seed = 12;
    sc.noise_std = 0.1;
    SegmentSpec s = activity_defaults(Activity::Walk);
    s.duration_s = Range::fixed(20);
    sc.segments = {s};
    const auto a = generate(sc, 100.0), b = generate(sc, 100.0);
    CHECK(a.recording.accel() == b.recording.accel());
    sc.seed = 13;
    CHECK(generate(sc, 100.0).recording.accel() != a.recording.accel());
  }

  TEST_CASE("scenario parsing")
  {
    const Scenario sc = parse_scenario(R"({"seed": 4, "noise_std": 0.2, "segments": [
      {"activity": "sit_typing", "duration_s": [60, 120], "phi_deg": -80, "dyn_dir": [0, 0, 2]},
      {"activity": "walk", "duration_s": 30}]})");
    REQUIRE(sc.segments.size() == 2);
    CHECK(sc.segments[0].duration_s.lo == 60);
    CHECK(sc.segments[0].duration_s.hi == 120);
    CHECK(sc.segments[0].phi.lo == doctest::Approx(-80 * kDeg));
    CHECK(sc.segments[0].dyn_dir->z == 1.0);
    CHECK(sc.segments[1].activity == Activity::Walk);

    auto code_of = [](const char* text) {
      try
      {
        parse_scenario(text);
      }
      catch (const Error& e)
      {
        return e.code();
      }
      return ErrorCode::Internal;
    };
    CHECK(code_of(R"({"segments": []})") == ErrorCode::Parse);
    CHECK(code_of(R"({"seed": 1, "segments": [{"activity": "run", "duration_s": 5}]})") == ErrorCode::Parse);
    CHECK(code_of(R"({"seed": 1, "segments": [{"activity": "walk", "duration_s": -5}]})") == ErrorCode::InvalidInput);
    CHECK(code_of(R"({"seed": 1, "segments": [{"activity": "walk", "duration_s": 5, "dyn_accel_amp": -1}]})") ==
          ErrorCode::InvalidInput);
    CHECK(code_of("{not json") == ErrorCode::Parse);
  }

  TEST_CASE("walking has higher rotation-vector entropy than sitting still")
  {
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
      Scenario sc;
      sc.seed = seed;
      sc.noise_std = 0.05;
      SegmentSpec w = activity_defaults(Activity::Walk);
      w.duration_s = Range::fixed(30);
      SegmentSpec s = activity_defaults(Activity::SitStill);
      s.duration_s = Range::fixed(30);
      sc.segments = {w, s};
      const SynthOutput out = generate(sc, 100.0);
      const auto seg = features::segment_windows(out.recording, 30.0, 100.0);
      REQUIRE(seg.windows.size() == 2);
      const features::FeatureConfig cfg;
      const auto fw = features::assemble_features(seg.windows[0], cfg);
      const auto fs = features::assemble_features(seg.windows[1], cfg);
      const auto layout = features::make_layout(fw.groups);
      for (const char* ch : {"rx_fuzzy_entropy", "ry_fuzzy_entropy", "rz_fuzzy_entropy"})
      {
        const auto c = std::find(layout.names.begin(), layout.names.end(), ch) - layout.names.begin();
        CHECK(fw.values[c] > fs.values[c]);
      }
    }
  }
}
