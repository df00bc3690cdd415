/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#include "sitwatch/geom.hpp"

#include "sitwatch/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sitwatch::geom
{
namespace
{
constexpr double kPi = std::numbers::pi;

void require_finite(std::initializer_list<double> values, const char* what)
{
  for (double v : values)
  {
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": non-finite input");
  }
}

double determinant(const RotationMatrix3& r) noexcept
{
  return r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
         r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
         r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
}

// Axis for a rotation by (nearly) pi, where the antisymmetric part vanishes.
// R = 2 u u^T - I at alpha = pi, so |u_i| = sqrt((R_ii + 1) / 2); the largest
// component is taken positive and the others signed from R_ij + R_ji = 4 u_i u_j.
Vec3 axis_near_pi(const RotationMatrix3& r)
{
  std::array<double, 3> u{};
  std::size_t k = 0;
  for (std::size_t i = 0; i < 3; ++i)
  {
    u[i] = std::sqrt(std::max(0.0, (r(i, i) + 1.0) / 2.0));
    if (u[i] > u[k])
      k = i;
  }
  for (std::size_t j = 0; j < 3; ++j)
  {
    if (j != k)
      u[j] = (r(k, j) + r(j, k)) / (4.0 * u[k]);
  }

  Vec3 axis{u[0], u[1], u[2]};
  const double n = norm(axis);
  axis = (1.0 / n) * axis;

  // Remaining sign from the (tiny) antisymmetric part when alpha is not exactly pi.
  const Vec3 anti{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
  if (anti.x * axis.x + anti.y * axis.y + anti.z * axis.z < 0.0)
    axis = -1.0 * axis;
  return axis;
}

double angular_distance(double a, double b) noexcept
{
  return std::abs(wrap_angle(a - b));
}

} // namespace

double norm(const Vec3& v) noexcept
{
  return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

bool is_finite(const Vec3& v) noexcept
{
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

Vec3 operator*(const RotationMatrix3& r, const Vec3& v) noexcept
{
  return {r(0, 0) * v.x + r(0, 1) * v.y + r(0, 2) * v.z,
          r(1, 0) * v.x + r(1, 1) * v.y + r(1, 2) * v.z,
          r(2, 0) * v.x + r(2, 1) * v.y + r(2, 2) * v.z};
}

double RotationVector::angle() const noexcept
{
  return std::sqrt(rx * rx + ry * ry + rz * rz);
}

double wrap_angle(double a) noexcept
{
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi)
    w += 2.0 * kPi;
  return w;
}

Vec3 gravity_in_watch_frame(double phi, double theta, double psi, double g_mag)
{
  require_finite({phi, theta, psi, g_mag}, "gravity_in_watch_frame");
  if (!(g_mag > 0.0))
    throw Error(ErrorCode::InvalidArgument, "gravity_in_watch_frame: g_mag must be positive");

  const double ct = std::cos(theta);
  return {g_mag * std::sin(theta), -g_mag * std::sin(phi) * ct, -g_mag * std::cos(phi) * ct};
}

EulerPR estimate_pitch_roll(const Vec3& g)
{
  if (!is_finite(g))
    throw Error(ErrorCode::InvalidArgument, "estimate_pitch_roll: non-finite input");
  const double mag = norm(g);
  if (mag <= kMinGravityMagnitude)
  {
    std::ostringstream os;
    os << "estimate_pitch_roll: |g| = " << mag << " m/s^2 is below " << kMinGravityMagnitude
       << ", orientation unrecoverable";
    throw Error(ErrorCode::DegenerateInput, os.str());
  }

  EulerPR out;
  out.theta = std::atan2(g.x, std::sqrt(g.y * g.y + g.z * g.z));
  out.near_singular = std::abs(std::cos(out.theta)) < kGimbalLockCosEps;
  out.phi = out.near_singular ? 0.0 : wrap_angle(std::atan2(-g.y, -g.z));
  return out;
}

RotationMatrix3 rotation_matrix_xy(double phi, double theta)
{
  require_finite({phi, theta}, "rotation_matrix_xy");
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const double st = std::sin(theta);
  const double ct = std::cos(theta);

  RotationMatrix3 r;
  r.m = {{{ct, 0.0, -st}, {sp * st, cp, sp * ct}, {cp * st, -sp, cp * ct}}};
  return r;
}

bool is_rotation(const RotationMatrix3& r, double tol) noexcept
{
  for (std::size_t i = 0; i < 3; ++i)
  {
    for (std::size_t j = 0; j < 3; ++j)
    {
      if (!std::isfinite(r(i, j)))
        return false;
      double dot = 0.0;
      for (std::size_t k = 0; k < 3; ++k)
        dot += r(k, i) * r(k, j);
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > tol)
        return false;
    }
  }
  return std::abs(determinant(r) - 1.0) <= tol;
}

RotationVector rotation_vector_from_matrix(const RotationMatrix3& r)
{
  if (!is_rotation(r))
    throw Error(ErrorCode::InvalidRotation, "rotation_vector_from_matrix: matrix is not a proper rotation");

  const Vec3 anti{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
  // atan2 keeps the angle well conditioned near 0 and pi, where acos is not.
  const double alpha = std::atan2(norm(anti) / 2.0, (r.trace() - 1.0) / 2.0);

  if (alpha <= kSmallAngleEps)
    return {anti.x / 2.0, anti.y / 2.0, anti.z / 2.0};

  if (alpha >= kPi - kNearPiEps)
  {
    const Vec3 u = axis_near_pi(r);
    return {alpha * u.x, alpha * u.y, alpha * u.z};
  }

  const double scale = alpha / (2.0 * std::sin(alpha));
  return {scale * anti.x, scale * anti.y, scale * anti.z};
}

RotationMatrix3 rotation_matrix_from_vector(const RotationVector& rv)
{
  if (!is_finite(rv.as_vec3()))
    throw Error(ErrorCode::InvalidArgument, "rotation_matrix_from_vector: non-finite input");
  const double alpha = rv.angle();
  if (alpha > kPi + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "rotation_matrix_from_vector: |r| exceeds pi");

  // sin(a)/a and (1 - cos(a))/a^2, series near zero.
  double a;
  double b;
  if (alpha < 1e-4)
  {
    const double a2 = alpha * alpha;
    a = 1.0 - a2 / 6.0;
    b = 0.5 - a2 / 24.0;
  }
  else
  {
    a = std::sin(alpha) / alpha;
    b = (1.0 - std::cos(alpha)) / (alpha * alpha);
  }

  const double x = rv.rx;
  const double y = rv.ry;
  const double z = rv.rz;
  // R = I + a K + b K^2 with K = [r]x.
  RotationMatrix3 out;
  out.m = {{{1.0 - b * (y * y + z * z), -a * z + b * x * y, a * y + b * x * z},
            {a * z + b * x * y, 1.0 - b * (x * x + z * z), -a * x + b * y * z},
            {-a * y + b * x * z, a * x + b * y * z, 1.0 - b * (x * x + y * y)}}};
  return out;
}

GravityOrientation orientation_from_gravity(const Vec3& g, const std::optional<EulerPR>& prev)
{
  const EulerPR est = estimate_pitch_roll(g);

  EulerPR eff = est;
  if (est.near_singular)
  {
    eff.phi = prev ? prev->phi : 0.0;
    const double c = -(std::sin(eff.phi) * g.y + std::cos(eff.phi) * g.z);
    eff.theta = std::atan2(g.x, c);
  }
  else if (prev)
  {
    const double alt_phi = wrap_angle(est.phi + kPi);
    const double alt_theta = wrap_angle(kPi - est.theta);
    const double d_main = angular_distance(est.phi, prev->phi) + angular_distance(est.theta, prev->theta);
    const double d_alt = angular_distance(alt_phi, prev->phi) + angular_distance(alt_theta, prev->theta);
    if (d_alt < d_main)
    {
      eff.phi = alt_phi;
      eff.theta = alt_theta;
    }
  }

  return {eff, rotation_vector_from_matrix(rotation_matrix_xy(eff.phi, eff.theta))};
}

} // namespace sitwatch::geom
