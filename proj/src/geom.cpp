#include "panelcast/geom.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"

namespace panelcast {

double wrap_two_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

Direction::Direction(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < 1e-300) {
    fail(ErrorKind::geometry, "direction vector has zero or non-finite length");
  }
  v_ = v / n;
}

Direction Direction::from_angles(double zenith, double azimuth) {
  const double s = std::sin(zenith);
  return Direction(Vec3(s * std::sin(azimuth), s * std::cos(azimuth), std::cos(zenith)));
}

double Direction::zenith() const {
  return std::atan2(std::hypot(v_.x(), v_.y()), v_.z());
}

double Direction::azimuth() const {
  if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
  return wrap_two_pi(std::atan2(v_.x(), v_.y()));
}

double Direction::angle_to(const Direction& other) const {
  return std::atan2(v_.cross(other.v_).norm(), v_.dot(other.v_));
}

std::string Direction::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.12g %.12g %.12g", v_.x(), v_.y(), v_.z());
  return buf;
}

namespace {

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

}  // namespace

Rotation::Rotation(const Mat3& m) {
  if (!m.allFinite()) fail(ErrorKind::geometry, "rotation has non-finite entries");
  const double orth = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (orth > 1e-6 || std::abs(det - 1.0) > 1e-6) {
    fail(ErrorKind::geometry, "matrix is not a proper rotation");
  }
  m_ = nearest_rotation(m);
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  const Vec3 k = Direction(axis).vec();
  return Rotation(Eigen::AngleAxisd(angle, k).toRotationMatrix(), Trusted{});
}

Rotation Rotation::aligning(const Direction& from, const Direction& to) {
  const Vec3 a = from.vec();
  const Vec3 b = to.vec();
  const Vec3 axis = a.cross(b);
  const double s = axis.norm();
  const double c = a.dot(b);
  if (s < 1e-15) {
    if (c > 0.0) return Rotation();
    // Antiparallel: half-turn about any axis perpendicular to `a`.
    Vec3 perp = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    perp = (perp - perp.dot(a) * a).normalized();
    return about_axis(perp, kPi);
  }
  return about_axis(axis, std::atan2(s, c));
}

Rotation Rotation::with_optical_axis(const Direction& axis) {
  const Vec3 z = axis.vec();
  // Near-vertical axes keep North as image +y; otherwise image +y leans up.
  const Vec3 hint = std::abs(z.z()) > 0.999 ? Vec3::UnitY() : Vec3::UnitZ();
  Vec3 x = hint.cross(z).normalized();
  Vec3 y = z.cross(x);
  Mat3 m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  return Rotation(m);
}

Rotation Rotation::inverse() const { return Rotation(Mat3(m_.transpose()), Trusted{}); }

Rotation Rotation::operator*(const Rotation& other) const {
  return Rotation(nearest_rotation(m_ * other.m_), Trusted{});
}

double Rotation::angle_to(const Rotation& other) const {
  const Mat3 r = m_ * other.m_.transpose();
  // Robust angle: sin from the skew part, cos from the trace.
  const Vec3 w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * w.norm(), 0.5 * (r.trace() - 1.0));
}

std::array<double, 9> Rotation::row_major() const {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(3 * r + c)] = m_(r, c);
  return out;
}

Rotation Rotation::from_row_major(const std::array<double, 9>& values) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = values[static_cast<std::size_t>(3 * r + c)];
  return Rotation(m);
}

std::string Rotation::to_string() const {
  std::string out;
  char buf[32];
  const auto v = row_major();
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

HemisphereGrid::HemisphereGrid(double step_deg) {
  if (!(step_deg > 0.0) || step_deg > 45.0) {
    fail(ErrorKind::config, "quadrature step must be in (0, 45] degrees");
  }
  n_zenith_ = static_cast<std::size_t>(std::max(1.0, std::round(90.0 / step_deg)));
  n_azimuth_ = 4 * n_zenith_;
  step_deg_ = 90.0 / static_cast<double>(n_zenith_);
  const double dz = deg2rad(step_deg_);
  const double da = kTwoPi / static_cast<double>(n_azimuth_);
  cells_.reserve(n_zenith_ * n_azimuth_);
  for (std::size_t i = 0; i < n_zenith_; ++i) {
    const double zen = (static_cast<double>(i) + 0.5) * dz;
    const double sz = std::sin(zen);
    const double cz = std::cos(zen);
    for (std::size_t j = 0; j < n_azimuth_; ++j) {
      const double az = (static_cast<double>(j) + 0.5) * da;
      cells_.push_back({Vec3(sz * std::sin(az), sz * std::cos(az), cz), cz, sz * dz * da});
    }
  }
}

Vec3 parse_vec3(std::string_view text, std::string_view what) {
  std::string cleaned(text);
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  const auto parts = split_whitespace(cleaned);
  if (parts.size() != 3) {
    fail(ErrorKind::parse, std::string(what) + ": expected three numbers, got '" + std::string(text) + "'");
  }
  return Vec3(parse_double(parts[0], what), parse_double(parts[1], what), parse_double(parts[2], what));
}

Rotation parse_rotation(std::string_view text, std::string_view source_name) {
  std::vector<std::string> numbers;
  for (const auto& line : split(text, '\n')) {
    const auto body = line.substr(0, line.find('#'));
    for (auto& tok : split_whitespace(body)) numbers.push_back(std::move(tok));
  }
  if (numbers.size() != 9) {
    fail(ErrorKind::parse, std::string(source_name) + ": expected 9 numbers, got " +
                               std::to_string(numbers.size()));
  }
  std::array<double, 9> v{};
  for (std::size_t i = 0; i < 9; ++i) v[i] = parse_double(numbers[i], source_name);
  return Rotation::from_row_major(v);
}

std::string format_rotation(const Rotation& r) {
  const auto v = r.row_major();
  std::string out = "# camera -> Earth (East, North, Up), row-major\n";
  char buf[32];
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[static_cast<std::size_t>(3 * row + col)]);
      out += buf;
      out += col == 2 ? '\n' : ' ';
    }
  }
  return out;
}

}  // namespace panelcast
