/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "oracles.hpp"

#include "sitwatch/error.hpp"
#include "sitwatch/geom.hpp"
#include "sitwatch/rng.hpp"

#include <doctest.h>

#include <numbers>

using namespace sitwatch;
using namespace sitwatch::geom;

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double max_diff(const RotationMatrix3& a, const oracle::Mat& b)
{
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      d = std::max(d, std::fabs(a.m[i][j] - b[i][j]));
  return d;
}
} // namespace

TEST_SUITE("geom")
{
  TEST_CASE("gravity model matches the composed elementary rotations")
  {
    Rng rng(11);
    for (int i = 0; i < 200; ++i)
    {
      const double phi = rng.uniform(-kPi, kPi), theta = rng.uniform(-kPi / 2, kPi / 2);
      const double psi = rng.uniform(-kPi, kPi);
      const Vec3 g = gravity_in_watch_frame(phi, theta, psi, 9.81);
      const auto o = oracle::gravity(phi, theta, psi, 9.81);
      CHECK(g.x == doctest::Approx(o[0]).epsilon(1e-12));
      CHECK(std::fabs(g.y - o[1]) < 1e-12);
      CHECK(std::fabs(g.z - o[2]) < 1e-12);
    }
  }

  TEST_CASE("level watch sees -g on z")
  {
    const Vec3 g = gravity_in_watch_frame(0, 0, 0, 9.81);
    CHECK(g.x == 0.0);
    CHECK(g.y == 0.0);
    CHECK(g.z == -9.81);
    const EulerPR e = estimate_pitch_roll(g);
    CHECK(e.phi == 0.0);
    CHECK(e.theta == 0.0);
    CHECK_FALSE(e.near_singular);
  }

  TEST_CASE("pitch/roll round trip away from gimbal lock")
  {
    Rng rng(3);
    for (int i = 0; i < 500; ++i)
    {
      const double phi = rng.uniform(-kPi + 1e-6, kPi), theta = rng.uniform(-85 * kDeg, 85 * kDeg);
      const EulerPR e = estimate_pitch_roll(gravity_in_watch_frame(phi, theta, rng.uniform(-kPi, kPi), 9.81));
      CHECK(std::fabs(wrap_angle(e.phi - phi)) < 1e-9);
      CHECK(std::fabs(e.theta - theta) < 1e-9);
    }
  }

  TEST_CASE("near gimbal lock flags and reports phi = 0")
  {
    const EulerPR e = estimate_pitch_roll(gravity_in_watch_frame(20 * kDeg, 89.9 * kDeg, 0, 9.81));
    CHECK(e.near_singular);
    CHECK(e.phi == 0.0);
    CHECK(e.theta == doctest::Approx(89.9 * kDeg).epsilon(1e-6));
  }

  TEST_CASE("degenerate gravity is rejected")
  {
    CHECK_THROWS_AS(estimate_pitch_roll({0.01, 0.02, 0.03}), Error);
    try
    {
      estimate_pitch_roll({0, 0, 0});
    }
    catch (const Error& e)
    {
      CHECK(e.code() == ErrorCode::DegenerateInput);
    }
  }

  TEST_CASE("Rxy matches the closed form and is a rotation")
  {
    Rng rng(5);
    for (int i = 0; i < 100; ++i)
    {
      const double phi = rng.uniform(-kPi, kPi), theta = rng.uniform(-kPi / 2, kPi / 2);
      const RotationMatrix3 r = rotation_matrix_xy(phi, theta);
      CHECK(max_diff(r, oracle::mul(oracle::rx(phi), oracle::ry(theta))) < 1e-14);
      CHECK(is_rotation(r));
    }
  }

  TEST_CASE("sign convention: quarter pitch maps to r = [-pi/2, 0, 0]")
  {
    const RotationVector r = rotation_vector_from_matrix(rotation_matrix_xy(kPi / 2, 0));
    CHECK(r.rx == doctest::Approx(-kPi / 2).epsilon(1e-12));
    CHECK(std::fabs(r.ry) < 1e-12);
    CHECK(std::fabs(r.rz) < 1e-12);
  }

  TEST_CASE("exponential map agrees with the matrix power series")
  {
    Rng rng(9);
    for (int i = 0; i < 200; ++i)
    {
      const double a = rng.uniform(0, kPi);
      Vec3 u{rng.normal(), rng.normal(), rng.normal()};
      u = (1.0 / norm(u)) * u;
      const RotationMatrix3 m = rotation_matrix_from_vector({a * u.x, a * u.y, a * u.z});
      CHECK(max_diff(m, oracle::expm_series({a * u.x, a * u.y, a * u.z})) < 1e-12);
    }
  }

  TEST_CASE("identity and near-pi extraction")
  {
    const RotationVector z = rotation_vector_from_matrix(RotationMatrix3::identity());
    CHECK(z.angle() == 0.0);

    const RotationVector r = rotation_vector_from_matrix(rotation_matrix_from_vector({0, kPi, 0}));
    CHECK(r.angle() == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(std::fabs(std::fabs(r.ry) - kPi) < 1e-9);

    const Vec3 u = (1.0 / std::sqrt(3.0)) * Vec3{1, 1, 1};
    const double a = kPi - 1e-8;
    const RotationVector s = rotation_vector_from_matrix(rotation_matrix_from_vector({a * u.x, a * u.y, a * u.z}));
    const RotationMatrix3 back = rotation_matrix_from_vector(s);
    CHECK(max_diff(back, oracle::expm_series({a * u.x, a * u.y, a * u.z})) < 1e-9);
  }

  TEST_CASE("invalid inputs")
  {
    RotationMatrix3 bad;
    bad.m[0][0] = 2.0;
    CHECK_THROWS_AS(rotation_vector_from_matrix(bad), Error);
    CHECK_THROWS_AS(rotation_matrix_from_vector({4.0, 0, 0}), Error);
    RotationMatrix3 reflect;
    reflect.m[2][2] = -1.0;
    CHECK_FALSE(is_rotation(reflect));
  }

  TEST_CASE("temporal hold keeps the vector continuous through +-90 degrees roll")
  {
    // 0 -> 170 -> -170 -> 0 degrees, crossing +90 twice and -90 once
    std::vector<double> path;
    for (int k = 0; k <= 1700; ++k)
      path.push_back(k * 0.1);
    for (int k = 1699; k >= -1700; --k)
      path.push_back(k * 0.1);
    for (int k = -1699; k <= 0; ++k)
      path.push_back(k * 0.1);
    std::optional<EulerPR> prev;
    RotationVector last;
    double worst = 0.0;
    for (double t : path)
    {
      const auto o = orientation_from_gravity(gravity_in_watch_frame(20 * kDeg, t * kDeg, 0, 9.81), prev);
      if (prev)
        worst = std::max(worst, norm(o.r.as_vec3() - last.as_vec3()));
      prev = o.angles;
      last = o.r;
    }
    CHECK(worst < 3 * 0.1 * kDeg);
    CHECK(last.angle() == doctest::Approx(20 * kDeg)); // back on the starting branch
  }

  TEST_CASE("orientation without history equals the direct chain")
  {
    const Vec3 g = gravity_in_watch_frame(-1.0, 0.4, 0, 9.81);
    const auto o = orientation_from_gravity(g, std::nullopt);
    const auto e = estimate_pitch_roll(g);
    const auto r = rotation_vector_from_matrix(rotation_matrix_xy(e.phi, e.theta));
    CHECK(o.r.rx == r.rx);
    CHECK(o.r.ry == r.ry);
    CHECK(o.r.rz == r.rz);
  }

  TEST_CASE("wrap_angle range")
  {
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  }
}
