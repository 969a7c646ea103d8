#include "panelcast/orientation.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "panelcast/error.hpp"

namespace panelcast {

Rotation kabsch(const std::vector<DirectionPair>& pairs) {
  if (pairs.size() < 2) {
    fail(ErrorKind::geometry, "kabsch needs at least two direction pairs");
  }
  const Vec3& first = pairs.front().first.vec();
  bool spread = false;
  for (const auto& [cam, earth] : pairs) {
    if (first.cross(cam.vec()).norm() > 1e-9) {
      spread = true;
      break;
    }
  }
  if (!spread) fail(ErrorKind::geometry, "camera-frame directions are all parallel");

  Mat3 h = Mat3::Zero();
  for (const auto& [cam, earth] : pairs) h += cam.vec() * earth.vec().transpose();

  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return Rotation(Mat3(v * d * u.transpose()));
}

Rotation azimuth_align(const Direction& gravity_cam, const Direction& gravity_earth,
                       const Direction& sun_cam, const Direction& sun_earth) {
  const Rotation level = Rotation::aligning(gravity_cam, gravity_earth);
  // Free axis: the (Earth-frame) vertical, i.e. opposite gravity.
  const Vec3 k = -gravity_earth.vec();
  const Vec3 a = level.apply(sun_cam.vec());
  const Vec3 s = sun_earth.vec();
  const Vec3 a_perp = a - a.dot(k) * k;
  const Vec3 s_perp = s - s.dot(k) * k;
  if (a_perp.norm() < 1e-9 || s_perp.norm() < 1e-9) {
    fail(ErrorKind::geometry, "sun is parallel to gravity; camera azimuth is unresolvable");
  }
  // argmax over phi of s . u(phi) a, with u a right-handed turn about k.
  const double phi = std::atan2(k.dot(a_perp.cross(s_perp)), a_perp.dot(s_perp));
  return Rotation::about_axis(k, phi) * level;
}

}  // namespace panelcast
