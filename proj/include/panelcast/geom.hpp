#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace panelcast {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double angle);

// Frame conventions used throughout:
//   Earth frame: x = East, y = North, z = Up.
//   Azimuth is measured clockwise from North (x toward East).
//   d(zenith, azimuth) = (sin z sin a, sin z cos a, cos z).
// Camera frames use the same angle-to-vector mapping with the camera's own
// axes; the optical axis is +z.

/// Unit 3-vector.
class Direction {
 public:
  Direction() : v_(0.0, 0.0, 1.0) {}
  /// Normalizes `v`; throws geometry_error for a zero or non-finite vector.
  explicit Direction(const Vec3& v);
  Direction(double x, double y, double z) : Direction(Vec3(x, y, z)) {}

  static Direction from_angles(double zenith, double azimuth);

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

  double zenith() const;
  /// In [0, 2pi); 0 at the poles.
  double azimuth() const;

  double dot(const Direction& other) const { return v_.dot(other.v_); }
  Direction operator-() const { return Direction(Vec3(-v_)); }

  /// Angle between two directions, robust near 0 and pi.
  double angle_to(const Direction& other) const;

  std::string to_string() const;

 private:
  Vec3 v_;
};

/// Proper orthonormal 3x3 rotation (row-major when serialized).
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}
  /// Validates orthonormality and det = +1 within 1e-6 and re-orthonormalizes
  /// to machine precision; throws geometry_error otherwise.
  explicit Rotation(const Mat3& m);

  static Rotation identity() { return Rotation(); }
  static Rotation about_axis(const Vec3& axis, double angle);
  /// Smallest rotation taking `from` onto `to`.
  static Rotation aligning(const Direction& from, const Direction& to);
  /// Any rotation whose third column (image of +z) is `axis`; x/y chosen
  /// deterministically so that +y points as close to Earth North/up as
  /// possible.
  static Rotation with_optical_axis(const Direction& axis);

  const Mat3& matrix() const { return m_; }

  Direction apply(const Direction& d) const { return Direction(Vec3(m_ * d.vec())); }
  Vec3 apply(const Vec3& v) const { return m_ * v; }
  Rotation inverse() const;
  Rotation operator*(const Rotation& other) const;

  /// Rotation angle of this * other^T.
  double angle_to(const Rotation& other) const;

  std::array<double, 9> row_major() const;
  static Rotation from_row_major(const std::array<double, 9>& values);
  std::string to_string() const;

 private:
  struct Trusted {};
  Rotation(const Mat3& m, Trusted) : m_(m) {}
  Mat3 m_;
};

/// Midpoint-rule cell of a (zenith, azimuth) grid over a hemisphere.
struct HemisphereCell {
  Vec3 dir;
  double cos_zenith;
  /// sin(zenith) * dzenith * dazimuth (solid angle of the cell).
  double solid_angle;
};

/// Midpoint-rule quadrature grid over zenith in [0, pi/2) and azimuth in
/// [0, 2pi), expressed in a local frame whose +z is the pole. The default
/// step is 1 degree. Halving the step reduces the error roughly fourfold for
/// smooth integrands; discontinuous integrands (apertures) converge at first
/// order in the step.
class HemisphereGrid {
 public:
  explicit HemisphereGrid(double step_deg = 1.0);

  double step_deg() const { return step_deg_; }
  std::size_t zenith_count() const { return n_zenith_; }
  std::size_t azimuth_count() const { return n_azimuth_; }
  const std::vector<HemisphereCell>& cells() const { return cells_; }

 private:
  double step_deg_;
  std::size_t n_zenith_;
  std::size_t n_azimuth_;
  std::vector<HemisphereCell> cells_;
};

/// Three numbers separated by commas and/or whitespace.
Vec3 parse_vec3(std::string_view text, std::string_view what);

/// Rotation file: nine row-major numbers (any whitespace), `#` comments.
/// Throws parse_error for malformed text, geometry_error for a non-rotation.
Rotation parse_rotation(std::string_view text, std::string_view source_name = "rotation");
std::string format_rotation(const Rotation& r);

}  // namespace panelcast
