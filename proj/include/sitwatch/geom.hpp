/*
 *  Copyright (C) 2026 The sitwatch authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 *  See the file LICENSE for more information.
 */

#pragma once

#include <array>
#include <cstddef>
#include <optional>

/*
 * Watch-frame rotation mathematics.
 *
 * Frame: with the watch flat and the screen facing up, x points right across
 * the wrist, y points forward along the forearm and z points out of the screen.
 * Pitch phi rotates about x, roll theta about y, yaw psi about z.
 *
 * All matrices are PASSIVE (change of frame): they express a fixed world
 * vector in the rotated watch frame, and are the transpose of the usual active
 * rotation. For example
 *
 *   Rx(phi) = [1 0 0; 0 cos(phi) sin(phi); 0 -sin(phi) cos(phi)]
 *
 * and g_watch = Rx(phi) Ry(theta) Rz(psi) [0, 0, -g]^T.
 *
 * Rotation vectors use the standard axis-angle map r = alpha * u with
 * R = I + sin(alpha) [u]x + (1 - cos(alpha)) [u]x^2. Combined with the passive
 * convention this makes a positive pitch produce a NEGATIVE x component:
 * rotation_matrix_xy(pi/2, 0) maps to r = [-pi/2, 0, 0].
 *
 * Angles are radians throughout.
 */

namespace sitwatch::geom
{

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
double norm(const Vec3& v) noexcept;
bool is_finite(const Vec3& v) noexcept;

/// Pitch/roll pair recovered from gravity. Yaw is unobservable and has no field.
struct EulerPR
{
  double phi = 0.0;   // pitch, (-pi, pi]
  double theta = 0.0; // roll, [-pi/2, pi/2]
  bool near_singular = false;
};

/// Row-major 3x3 matrix; m[i][j] is R_(i+1)(j+1).
struct RotationMatrix3
{
  std::array<std::array<double, 3>, 3> m{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

  double operator()(std::size_t i, std::size_t j) const { return m[i][j]; }
  double& operator()(std::size_t i, std::size_t j) { return m[i][j]; }
  double trace() const noexcept { return m[0][0] + m[1][1] + m[2][2]; }

  static RotationMatrix3 identity() { return {}; }
};

Vec3 operator*(const RotationMatrix3& r, const Vec3& v) noexcept;

/// r = alpha * u with |r| = alpha in [0, pi].
struct RotationVector
{
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double angle() const noexcept;
  Vec3 as_vec3() const noexcept { return {rx, ry, rz}; }
};

// |cos(theta)| below this flags gimbal lock (theta beyond ~89.4 degrees).
inline constexpr double kGimbalLockCosEps = 1e-2;
// Rotation angle at or below which the first-order small-angle formula is used.
inline constexpr double kSmallAngleEps = 1e-6;
// Distance from pi within which the axis is extracted from the diagonal.
inline constexpr double kNearPiEps = 1e-6;
// Minimum |g_watch| (m/s^2) from which an orientation is recoverable.
inline constexpr double kMinGravityMagnitude = 0.1;
// Per-entry tolerance for orthonormality and determinant checks.
inline constexpr double kOrthonormalTol = 1e-9;

/// Gravity [0, 0, -g] expressed in the watch frame. psi only enters through
/// Rz(psi), which leaves the vertical untouched; it is validated but cannot
/// change the result.
Vec3 gravity_in_watch_frame(double phi, double theta, double psi, double g_mag);

/// Pitch and roll from a gravity-dominated acceleration sample.
/// Throws DegenerateInput if |g| <= kMinGravityMagnitude. Near gimbal lock the
/// returned phi is 0 (start-of-sequence value of the hold policy).
EulerPR estimate_pitch_roll(const Vec3& g_watch);

/// Rxy = Rx(phi) Ry(theta).
RotationMatrix3 rotation_matrix_xy(double phi, double theta);

/// Axis-angle extraction. Throws InvalidRotation for non-orthonormal input.
RotationVector rotation_vector_from_matrix(const RotationMatrix3& r);

/// Exponential map. Throws InvalidArgument for |r| > pi.
RotationMatrix3 rotation_matrix_from_vector(const RotationVector& r);

bool is_rotation(const RotationMatrix3& r, double tol = kOrthonormalTol) noexcept;

/// Angles actually used to build Rxy for one sample of a sequence, together
/// with the resulting rotation vector. `angles.theta` may leave [-pi/2, pi/2]
/// after the sequence has passed through gimbal lock (see below).
struct GravityOrientation
{
  EulerPR angles;
  RotationVector r;
};

/*
 * Rotation vector for one gravity sample, threading the previous sample's
 * effective angles through `prev`.
 *
 * Temporal-hold policy:
 *  - near gimbal lock, phi is held from `prev` (0 without one) and theta is the
 *    least-squares roll for that phi, atan2(gx, -(sin(phi) gy + cos(phi) gz));
 *  - otherwise, of the two Euler pairs that explain gravity exactly,
 *    (phi, theta) and (phi + pi, pi - theta), the one nearer `prev` is used.
 *
 * Without `prev` this is estimate_pitch_roll -> rotation_matrix_xy ->
 * rotation_vector_from_matrix. With it, a path that rolls through +-90 degrees
 * keeps a continuous rotation matrix instead of jumping by a half turn about
 * the vertical.
 */
GravityOrientation orientation_from_gravity(const Vec3& g_watch, const std::optional<EulerPR>& prev);

inline RotationVector rotation_vector_from_gravity(const Vec3& g_watch, const std::optional<EulerPR>& prev)
{
  return orientation_from_gravity(g_watch, prev).r;
}

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a) noexcept;

} // namespace sitwatch::geom
