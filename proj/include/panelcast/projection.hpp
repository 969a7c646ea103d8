#pragma once

#include <optional>

#include "panelcast/geom.hpp"

namespace panelcast {

enum class ProjectionKind { equidistant_fisheye, equirectangular };

/// Image point in continuous pixel coordinates: (0,0) is the top-left
/// corner of the top-left pixel, so pixel (i, j) has its center at
/// (i + 0.5, j + 0.5).
struct PixelPoint {
  double u;
  double v;
};

/// Camera projection. The camera frame has +z along the optical axis, +x to
/// the image right and +y to the image top.
///
/// Equidistant fisheye: r = (theta / (fov / 2)) * min(w, h) / 2 around the
/// image center. Equirectangular: u spans azimuth atan2(y, x) over [0, 2pi),
/// v spans the polar angle from +z over [0, pi].
struct ProjectionModel {
  ProjectionKind kind = ProjectionKind::equidistant_fisheye;
  double fov = kPi;  // radians, fisheye only; (0, 2pi)

  static ProjectionModel fisheye(double fov_rad = kPi) {
    return {ProjectionKind::equidistant_fisheye, fov_rad};
  }
  static ProjectionModel equirectangular() { return {ProjectionKind::equirectangular, 2.0 * kPi}; }

  /// nullopt when the direction is outside the modeled field of view.
  std::optional<PixelPoint> project(const Vec3& dir_cam, int width, int height) const;
  /// nullopt for points outside the image circle / frame.
  std::optional<Vec3> unproject(PixelPoint p, int width, int height) const;

  /// True when `width` x `height` is a legal shape for this projection
  /// (square for fisheye, 2:1 for equirectangular).
  bool shape_ok(int width, int height) const;
  /// Throws format_error when the shape is illegal.
  void check_shape(int width, int height) const;
};

}  // namespace panelcast
