#include "panelcast/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "panelcast/error.hpp"

namespace panelcast {

std::optional<PixelPoint> ProjectionModel::project(const Vec3& d, int width, int height) const {
  const double w = width;
  const double h = height;
  const double theta = std::atan2(std::hypot(d.x(), d.y()), d.z());
  const double alpha = std::atan2(d.y(), d.x());
  if (kind == ProjectionKind::equirectangular) {
    double u = wrap_two_pi(alpha) / kTwoPi * w;
    if (u >= w) u = 0.0;
    return PixelPoint{u, theta / kPi * h};
  }
  const double half = 0.5 * fov;
  if (theta > half) return std::nullopt;
  const double radius = 0.5 * std::min(w, h);
  const double r = theta / half * radius;
  return PixelPoint{0.5 * w + r * std::cos(alpha), 0.5 * h - r * std::sin(alpha)};
}

std::optional<Vec3> ProjectionModel::unproject(PixelPoint p, int width, int height) const {
  const double w = width;
  const double h = height;
  if (kind == ProjectionKind::equirectangular) {
    if (p.u < 0.0 || p.u > w || p.v < 0.0 || p.v > h) return std::nullopt;
    const double alpha = p.u / w * kTwoPi;
    const double theta = p.v / h * kPi;
    const double s = std::sin(theta);
    return Vec3(s * std::cos(alpha), s * std::sin(alpha), std::cos(theta));
  }
  const double dx = p.u - 0.5 * w;
  const double dy = 0.5 * h - p.v;
  const double radius = 0.5 * std::min(w, h);
  const double r = std::hypot(dx, dy);
  if (r > radius) return std::nullopt;
  const double theta = r / radius * 0.5 * fov;
  const double alpha = std::atan2(dy, dx);
  const double s = std::sin(theta);
  return Vec3(s * std::cos(alpha), s * std::sin(alpha), std::cos(theta));
}

bool ProjectionModel::shape_ok(int width, int height) const {
  if (width <= 0 || height <= 0) return false;
  if (kind == ProjectionKind::equirectangular) return width == 2 * height;
  return width == height;
}

void ProjectionModel::check_shape(int width, int height) const {
  if (kind == ProjectionKind::equidistant_fisheye && !(fov > 0.0 && fov < kTwoPi)) {
    fail(ErrorKind::config, "fisheye field of view must be in (0, 360) degrees");
  }
  if (!shape_ok(width, height)) {
    fail(ErrorKind::format,
         std::string(kind == ProjectionKind::equirectangular ? "equirectangular images must be 2:1"
                                                             : "fisheye images must be square") +
             " (got " + std::to_string(width) + "x" + std::to_string(height) + ")");
  }
}

}  // namespace panelcast
