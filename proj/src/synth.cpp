/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/synth.hpp"

#include "sitwatch/error.hpp"
#include "sitwatch/features.hpp"
#include "sitwatch/geom.hpp"
#include "sitwatch/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace sitwatch::synth
{
namespace
{

constexpr double kDeg = std::numbers::pi / 180.0;

// Phase-rate and envelope modulation of the dynamic component.
constexpr double kFreqJitter = 0.12;
constexpr double kFreqJitterTau = 1.0;
constexpr double kEnvelopeJitter = 0.3;
constexpr double kEnvelopeTau = 0.5;
constexpr double kSecondHarmonic = 0.35;

double sample(const Range& r, Rng& rng)
{
  return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi);
}

Range parse_range(const nlohmann::json& j, const std::string& key, double scale)
{
  if (j.is_number())
    return Range::fixed(j.get<double>() * scale);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
  {
    Range r{j[0].get<double>() * scale, j[1].get<double>() * scale};
    if (r.lo > r.hi)
      throw Error(ErrorCode::Parse, "scenario: range '" + key + "' has lo > hi");
    return r;
  }
  throw Error(ErrorCode::Parse, "scenario: '" + key + "' must be a number or a [lo, hi] pair");
}

Vec3 random_direction(Rng& rng)
{
  for (;;)
  {
    const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    const double n = geom::norm(v);
    if (n > 1e-6)
      return (1.0 / n) * v;
  }
}

// Exact discretisation of an Ornstein-Uhlenbeck process with stationary std `sigma`.
class OuProcess
{
public:
  OuProcess(double sigma, double tau, double dt, Rng& rng)
    : m_decay(std::exp(-dt / tau)), m_kick(sigma * std::sqrt(1.0 - m_decay * m_decay)),
      m_x(sigma > 0.0 ? sigma * rng.normal() : 0.0)
  {
  }

  double value() const noexcept { return m_x; }

  void step(Rng& rng)
  {
    if (m_kick > 0.0)
      m_x = m_decay * m_x + m_kick * rng.normal();
  }

private:
  double m_decay;
  double m_kick;
  double m_x;
};

} // namespace

std::string_view activity_name(Activity a) noexcept
{
  switch (a)
  {
    case Activity::SitTyping:
      return "sit_typing";
    case Activity::SitStill:
      return "sit_still";
    case Activity::StandStill:
      return "stand_still";
    case Activity::Walk:
      return "walk";
    case Activity::Gesture:
      return "gesture";
  }
  return "unknown";
}

Activity activity_from_name(std::string_view name)
{
  for (Activity a : {Activity::SitTyping, Activity::SitStill, Activity::StandStill, Activity::Walk, Activity::Gesture})
  {
    if (activity_name(a) == name)
      return a;
  }
  throw Error(ErrorCode::Parse, "scenario: unknown activity '" + std::string(name) + "'");
}

Label activity_label(Activity a) noexcept
{
  return (a == Activity::SitTyping || a == Activity::SitStill) ? Label::Sit : Label::NonSit;
}

SegmentSpec activity_defaults(Activity a)
{
  SegmentSpec s;
  s.activity = a;
  s.duration_s = Range::fixed(60.0);
  s.jitter_tau_s = Range::fixed(4.0);
  switch (a)
  {
    case Activity::SitTyping: // forearm on the desk
      s.phi = Range::fixed(-90.0 * kDeg);
      s.theta = Range::fixed(5.0 * kDeg);
      s.pose_jitter = Range::fixed(3.0 * kDeg);
      s.dyn_accel_amp = Range::fixed(0.3);
      s.dyn_accel_hz = Range::fixed(4.0);
      break;
    case Activity::SitStill:
      s.phi = Range::fixed(-75.0 * kDeg);
      s.theta = Range::fixed(10.0 * kDeg);
      s.pose_jitter = Range::fixed(1.5 * kDeg);
      s.dyn_accel_amp = Range::fixed(0.0);
      s.dyn_accel_hz = Range::fixed(0.0);
      break;
    case Activity::StandStill: // arm hanging
      s.phi = Range::fixed(0.0);
      s.theta = Range::fixed(0.0);
      s.pose_jitter = Range::fixed(3.0 * kDeg);
      s.dyn_accel_amp = Range::fixed(0.1);
      s.dyn_accel_hz = Range::fixed(0.5);
      break;
    case Activity::Walk:
      s.phi = Range::fixed(0.0);
      s.theta = Range::fixed(0.0);
      s.pose_jitter = Range::fixed(8.0 * kDeg);
      s.jitter_tau_s = Range::fixed(1.0);
      s.dyn_accel_amp = Range::fixed(3.0);
      s.dyn_accel_hz = Range::fixed(2.0);
      break;
    case Activity::Gesture:
      s.phi = Range::fixed(-40.0 * kDeg);
      s.theta = Range::fixed(20.0 * kDeg);
      s.pose_jitter = Range::fixed(15.0 * kDeg);
      s.jitter_tau_s = Range::fixed(2.0);
      s.dyn_accel_amp = Range::fixed(1.0);
      s.dyn_accel_hz = Range::fixed(1.0);
      break;
  }
  return s;
}

void Scenario::validate() const
{
  if (segments.empty())
    throw Error(ErrorCode::InvalidInput, "scenario has no segments");
  if (repeat < 1)
    throw Error(ErrorCode::InvalidInput, "scenario repeat must be >= 1");
  if (!(noise_std >= 0.0) || !(gravity > 0.0))
    throw Error(ErrorCode::InvalidInput, "scenario noise_std must be >= 0 and gravity > 0");
  for (std::size_t i = 0; i < segments.size(); ++i)
  {
    const auto& s = segments[i];
    const std::string where = "scenario segment " + std::to_string(i) + ": ";
    if (!(s.duration_s.lo > 0.0))
      throw Error(ErrorCode::InvalidInput, where + "duration must be > 0");
    if (s.pose_jitter.lo < 0.0 || s.dyn_accel_amp.lo < 0.0 || s.dyn_accel_hz.lo < 0.0 ||
        (s.noise_std && s.noise_std->lo < 0.0))
      throw Error(ErrorCode::InvalidInput, where + "amplitudes and rates must be >= 0");
    if (!(s.jitter_tau_s.lo > 0.0))
      throw Error(ErrorCode::InvalidInput, where + "jitter_tau_s must be > 0");
  }
}

Scenario parse_scenario(const std::string& json_text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(json_text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw Error(ErrorCode::Parse, std::string("scenario: ") + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::Parse, "scenario: top level must be an object");

  Scenario sc;
  try
  {
    sc.name = j.value("name", std::string{});
    if (!j.contains("seed"))
      throw Error(ErrorCode::Parse, "scenario: 'seed' is required");
    sc.seed = j.at("seed").get<std::uint64_t>();
    sc.noise_std = j.value("noise_std", 0.0);
    sc.gravity = j.value("gravity", 9.81);
    sc.start_ns = j.value("start_ns", TimeNs{0});
    sc.repeat = j.value("repeat", 1);
    sc.shuffle = j.value("shuffle", false);

    for (const auto& js : j.at("segments"))
    {
      SegmentSpec s = activity_defaults(activity_from_name(js.at("activity").get<std::string>()));
      if (!js.contains("duration_s"))
        throw Error(ErrorCode::Parse, "scenario: every segment needs 'duration_s'");
      s.duration_s = parse_range(js.at("duration_s"), "duration_s", 1.0);
      if (js.contains("phi_deg"))
        s.phi = parse_range(js.at("phi_deg"), "phi_deg", kDeg);
      if (js.contains("theta_deg"))
        s.theta = parse_range(js.at("theta_deg"), "theta_deg", kDeg);
      if (js.contains("pose_jitter_deg"))
        s.pose_jitter = parse_range(js.at("pose_jitter_deg"), "pose_jitter_deg", kDeg);
      if (js.contains("jitter_tau_s"))
        s.jitter_tau_s = parse_range(js.at("jitter_tau_s"), "jitter_tau_s", 1.0);
      if (js.contains("dyn_accel_amp"))
        s.dyn_accel_amp = parse_range(js.at("dyn_accel_amp"), "dyn_accel_amp", 1.0);
      if (js.contains("dyn_accel_hz"))
        s.dyn_accel_hz = parse_range(js.at("dyn_accel_hz"), "dyn_accel_hz", 1.0);
      if (js.contains("noise_std"))
        s.noise_std = parse_range(js.at("noise_std"), "noise_std", 1.0);
      if (js.contains("dyn_dir"))
      {
        const auto& d = js.at("dyn_dir");
        if (!d.is_array() || d.size() != 3)
          throw Error(ErrorCode::Parse, "scenario: 'dyn_dir' must be an array of 3 numbers");
        const Vec3 v{d[0].get<double>(), d[1].get<double>(), d[2].get<double>()};
        const double n = geom::norm(v);
        if (!(n > 1e-9) || !geom::is_finite(v))
          throw Error(ErrorCode::Parse, "scenario: 'dyn_dir' must be a finite non-zero vector");
        s.dyn_dir = (1.0 / n) * v;
      }
      sc.segments.push_back(s);
    }
  }
  catch (const nlohmann::json::exception& e)
  {
    throw Error(ErrorCode::Parse, std::string("scenario: ") + e.what());
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open scenario '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<Segment> expand(const Scenario& sc)
{
  sc.validate();
  Rng plan(mix_seed(sc.seed, 0));
  std::vector<Segment> out;
  for (int rep = 0; rep < sc.repeat; ++rep)
  {
    std::vector<std::size_t> order(sc.segments.size());
    std::iota(order.begin(), order.end(), 0);
    if (sc.shuffle)
      plan.shuffle(order);
    for (std::size_t i : order)
    {
      const SegmentSpec& s = sc.segments[i];
      Segment g;
      g.activity = s.activity;
      g.duration_s = sample(s.duration_s, plan);
      g.phi = sample(s.phi, plan);
      g.theta = sample(s.theta, plan);
      g.pose_jitter = sample(s.pose_jitter, plan);
      g.jitter_tau_s = sample(s.jitter_tau_s, plan);
      g.dyn_accel_amp = sample(s.dyn_accel_amp, plan);
      g.dyn_accel_hz = sample(s.dyn_accel_hz, plan);
      g.noise_std = s.noise_std ? sample(*s.noise_std, plan) : sc.noise_std;
      g.dyn_dir = s.dyn_dir;
      out.push_back(g);
    }
  }
  return out;
}

SynthOutput generate(const Scenario& sc, double rate)
{
  if (!(rate > 0.0))
    throw Error(ErrorCode::InvalidArgument, "synth: rate must be positive");

  SynthOutput out;
  out.segments = expand(sc);
  out.recording = ImuRecording(rate);

  double total_s = 0.0;
  for (const auto& s : out.segments)
    total_s += s.duration_s;
  out.recording.reserve(static_cast<std::size_t>(std::llround(total_s * rate)) + 1);

  const double dt = 1.0 / rate;
  double elapsed_s = 0.0;
  std::size_t k = 0;
  for (std::size_t si = 0; si < out.segments.size(); ++si)
  {
    const Segment& s = out.segments[si];
    elapsed_s += s.duration_s;
    // Cumulative rounding keeps boundaries from drifting over long scenarios.
    const auto end_k = static_cast<std::size_t>(std::llround(elapsed_s * rate));
    if (end_k <= k)
      continue;

    Rng rng(mix_seed(sc.seed, si + 1));
    OuProcess jit_phi(s.pose_jitter, s.jitter_tau_s, dt, rng);
    OuProcess jit_theta(s.pose_jitter, s.jitter_tau_s, dt, rng);
    const bool dynamic = s.dyn_accel_amp > 0.0;
    Vec3 dir1 = random_direction(rng);
    Vec3 dir2 = random_direction(rng);
    if (s.dyn_dir)
      dir1 = dir2 = *s.dyn_dir;
    double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double phase2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    OuProcess freq(dynamic ? kFreqJitter : 0.0, kFreqJitterTau, dt, rng);
    OuProcess envelope(dynamic ? kEnvelopeJitter : 0.0, kEnvelopeTau, dt, rng);

    out.labels.push_back({sc.start_ns + features::grid_time(0, k, rate), sc.start_ns + features::grid_time(0, end_k, rate),
                          activity_label(s.activity)});

    for (; k < end_k; ++k)
    {
      Vec3 a = geom::gravity_in_watch_frame(s.phi + jit_phi.value(), s.theta + jit_theta.value(), 0.0, sc.gravity);
      if (dynamic)
      {
        const double env = std::max(0.0, 1.0 + envelope.value());
        a = a + (s.dyn_accel_amp * env * std::sin(phase)) * dir1 +
            (kSecondHarmonic * s.dyn_accel_amp * env * std::sin(2.0 * phase + phase2)) * dir2;
        phase += 2.0 * std::numbers::pi * s.dyn_accel_hz * std::max(0.0, 1.0 + freq.value()) * dt;
      }
      if (s.noise_std > 0.0)
        a = a + Vec3{s.noise_std * rng.normal(), s.noise_std * rng.normal(), s.noise_std * rng.normal()};

      out.recording.push_back({sc.start_ns + features::grid_time(0, k, rate), a, std::nullopt});

      jit_phi.step(rng);
      jit_theta.step(rng);
      freq.step(rng);
      envelope.step(rng);
    }
  }
  return out;
}

} // namespace sitwatch::synth
