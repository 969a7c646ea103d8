#include "panelcast/panel_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"
#include "panelcast/parallel.hpp"
#include "panelcast/scene_function.hpp"

namespace panelcast {

namespace {

// Virtual perspective camera used for vanishing points: 90 degree field of
// view on a kVirtualSize pixel square.
constexpr double kVirtualSize = 1000.0;
constexpr double kHalf = kVirtualSize / 2.0;  // focal length in pixels at 90 degrees

Vec3 back_project(const CornerObservation& obs, const PixelPoint& p) {
  const auto ray = obs.projection.unproject(p, obs.width, obs.height);
  if (!ray) {
    fail(ErrorKind::geometry, "corner (" + format_g6(p.u) + ", " + format_g6(p.v) +
                                  ") lies outside the image's field of view");
  }
  return ray->normalized();
}

// Homogeneous pixel of a virtual-frame ray.
Vec3 to_virtual_pixel(const Vec3& ray) {
  if (ray.z() <= 1e-9) fail(ErrorKind::geometry, "corner lies behind the virtual perspective view");
  return Vec3(kHalf + kHalf * ray.x() / ray.z(), kHalf - kHalf * ray.y() / ray.z(), 1.0);
}

// Ray direction (virtual frame) of a homogeneous pixel, finite or not.
Vec3 from_virtual_pixel(const Vec3& h) {
  return Vec3((h.x() - kHalf * h.z()) / kHalf, -(h.y() - kHalf * h.z()) / kHalf, h.z());
}

Direction orient_sign(const Vec3& n, const Vec3& up, const Vec3& towards_camera) {
  const Vec3 u = n.normalized();
  const double s = u.dot(up);
  if (std::abs(s) > 1e-9) return Direction(Vec3(s > 0.0 ? u : -u));
  return Direction(Vec3(u.dot(towards_camera) >= 0.0 ? u : -u));
}

double sample_bilinear(const HdrImage& img, double u, double v, int channel) {
  const int w = img.width();
  const int h = img.height();
  const double x = u - 0.5;
  const double y = std::clamp(v - 0.5, 0.0, h - 1.0);
  const double xf = std::floor(x);
  const double yf = std::floor(y);
  const double fx = x - xf;
  const double fy = y - yf;
  const int x0 = ((static_cast<int>(xf) % w) + w) % w;
  const int x1 = (x0 + 1) % w;
  const int y0 = static_cast<int>(yf);
  const int y1 = std::min(y0 + 1, h - 1);
  const double a = img.pixel(x0, y0)[channel] * (1.0 - fx) + img.pixel(x1, y0)[channel] * fx;
  const double b = img.pixel(x0, y1)[channel] * (1.0 - fx) + img.pixel(x1, y1)[channel] * fx;
  return a * (1.0 - fy) + b * fy;
}

}  // namespace

void CornerObservation::validate() const {
  if (corners.size() != 2 && corners.size() != 4) {
    fail(ErrorKind::geometry, "need exactly 2 or 4 corners, got " + std::to_string(corners.size()));
  }
  projection.check_shape(width, height);
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t j = i + 1; j < corners.size(); ++j)
      if (std::hypot(corners[i].u - corners[j].u, corners[i].v - corners[j].v) < 1e-9)
        fail(ErrorKind::geometry, "corners " + std::to_string(i + 1) + " and " +
                                      std::to_string(j + 1) + " coincide");
}

std::vector<PixelPoint> parse_corners(const std::string& text, const std::string& source_name) {
  std::vector<PixelPoint> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto f = split_whitespace(line);
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (f.size() != 2) fail(ErrorKind::parse, where + ": expected 'u v'");
    try {
      out.push_back({parse_double(f[0], "u"), parse_double(f[1], "v")});
    } catch (const Error& e) {
      fail(ErrorKind::parse, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<PixelPoint> load_corners(const std::filesystem::path& path) {
  return parse_corners(read_file(path), path.string());
}

PanelNormalEstimate panel_normal_from_corners(const CornerObservation& obs,
                                              const Direction& gravity_cam) {
  obs.validate();
  std::vector<Vec3> rays;
  for (const auto& c : obs.corners) rays.push_back(back_project(obs, c));
  const Vec3 up = -gravity_cam.vec();
  Vec3 mean = Vec3::Zero();
  for (const auto& r : rays) mean += r;

  PanelNormalEstimate est;
  if (rays.size() == 2) {
    const Vec3 n = rays[0].cross(rays[1]);
    if (n.norm() < 1e-9) fail(ErrorKind::geometry, "back-projected corner rays are parallel");
    est.normal = orient_sign(n, up, -mean.normalized());
    return est;
  }

  if (mean.norm() < 1e-9) fail(ErrorKind::geometry, "corner rays cancel; no viewing direction");
  const Rotation view = Rotation::with_optical_axis(Direction(mean));
  const Mat3 to_virtual = view.matrix().transpose();
  std::vector<Vec3> px;
  for (const auto& r : rays) px.push_back(to_virtual_pixel(to_virtual * r));

  // Cyclic order around the centroid makes the result independent of how
  // the corners were listed.
  Vec3 c = Vec3::Zero();
  for (const auto& p : px) c += p;
  c /= 4.0;
  std::vector<std::pair<double, Vec3>> ordered;
  for (const auto& p : px) ordered.push_back({std::atan2(p.y() - c.y(), p.x() - c.x()), p});
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::array<Vec3, 4> q;
  for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(i)] = ordered[static_cast<std::size_t>(i)].second;

  // Collinearity and convexity from signed triangle areas.
  double scale = 0.0;
  for (const auto& p : q) scale = std::max(scale, (p - c).head<2>().norm());
  double sign = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec3& a = q[static_cast<std::size_t>(i)];
    const Vec3& b = q[static_cast<std::size_t>((i + 1) % 4)];
    const Vec3& d = q[static_cast<std::size_t>((i + 2) % 4)];
    const double area = (b.x() - a.x()) * (d.y() - b.y()) - (b.y() - a.y()) * (d.x() - b.x());
    if (std::abs(area) < 1e-9 * scale * scale) {
      fail(ErrorKind::geometry, "three panel corners are collinear");
    }
    if (sign != 0.0 && (area > 0.0) != (sign > 0.0)) {
      fail(ErrorKind::geometry, "panel corners do not form a convex quadrilateral");
    }
    sign = area;
  }

  const Vec3 vp1 = q[0].cross(q[1]).cross(q[3].cross(q[2]));
  const Vec3 vp2 = q[1].cross(q[2]).cross(q[0].cross(q[3]));
  const Vec3 d1 = from_virtual_pixel(vp1).normalized();
  const Vec3 d2 = from_virtual_pixel(vp2).normalized();
  const Vec3 n_virtual = d1.cross(d2);
  if (n_virtual.norm() < 1e-12) fail(ErrorKind::geometry, "vanishing directions are parallel");
  est.residual_deg = std::abs(90.0 - rad2deg(std::acos(std::clamp(d1.dot(d2), -1.0, 1.0))));
  est.normal = orient_sign(view.matrix() * n_virtual, up, -mean.normalized());
  if (est.residual_deg > 2.0) {
    est.warning = "opposite edges disagree by " + format_g6(est.residual_deg) +
                  " degrees; the panel may not be rectangular";
  }
  return est;
}

HdrImage extract_view(const HdrImage& spherical, const Rotation& orientation, int size) {
  const auto sphere = ProjectionModel::equirectangular();
  if (!sphere.shape_ok(spherical.width(), spherical.height())) {
    fail(ErrorKind::format, "view extraction needs an equirectangular image (width = 2 x height)");
  }
  if (size <= 0) size = spherical.height();
  const auto fisheye = ProjectionModel::fisheye(kPi);
  HdrImage out(size, size);
  out.metadata.capture = spherical.metadata.capture;
  if (spherical.metadata.gravity) {
    out.metadata.gravity = orientation.matrix().transpose() * *spherical.metadata.gravity;
  }
  const Mat3 to_sphere = orientation.matrix();
  parallel_for(static_cast<std::size_t>(size) * size, [&](std::size_t idx) {
    const int x = static_cast<int>(idx) % size;
    const int y = static_cast<int>(idx) / size;
    const auto d = fisheye.unproject({x + 0.5, y + 0.5}, size, size);
    if (!d) return;
    const auto p = sphere.project(to_sphere * *d, spherical.width(), spherical.height());
    if (!p) return;
    float* o = out.pixel(x, y);
    for (int ch = 0; ch < 3; ++ch) o[ch] = static_cast<float>(sample_bilinear(spherical, p->u, p->v, ch));
  });
  return out;
}

Site orientation_site(const HdrImage& spherical, const OrientationContext& context,
                      const PanelPose& panel) {
  const Rotation view = Rotation::with_optical_axis(context.r_ec.inverse().apply(panel.normal()));
  const HdrImage image = extract_view(spherical, view, context.view_size);
  const auto proj = ProjectionModel::fisheye(kPi);
  Site site;
  site.aperture = segment_sky(image, proj, context.segmentation);
  site.r_ec = context.r_ec * view;
  site.panel = panel;
  site.latitude_deg = context.latitude_deg;
  site.longitude_deg = context.longitude_deg;
  site.grid_step_deg = context.grid_step_deg;
  site.predictor = std::make_shared<GridScenePredictor>(analytic_canyon_predictor(
      site.aperture, site.r_ec, panel.normal(), context.albedo, std::nullopt, context.grid_step_deg));
  return site;
}

OrientationResult best_orientation(const HdrImage& spherical, const OrientationContext& context,
                                   const WeatherSeries& tmy, const SearchGrid& grid,
                                   const PanelPose& current) {
  if (!(grid.tilt_step_deg > 0.0) || !(grid.azimuth_step_deg > 0.0) ||
      !(grid.max_tilt_deg >= 0.0 && grid.max_tilt_deg <= 90.0)) {
    fail(ErrorKind::config, "search grid steps must be positive and max tilt within [0, 90]");
  }
  const auto climate =
      integrate_climate(context.latitude_deg, context.longitude_deg, tmy, context.grid_step_deg);

  OrientationResult result;
  const int n_tilt = static_cast<int>(std::floor(grid.max_tilt_deg / grid.tilt_step_deg + 1e-9)) + 1;
  const int n_az = std::max(1, static_cast<int>(std::ceil(360.0 / grid.azimuth_step_deg - 1e-9)));
  for (int i = 0; i < n_tilt; ++i) {
    const double tilt = i * grid.tilt_step_deg;
    for (int j = 0; j < (i == 0 ? 1 : n_az); ++j) {
      result.candidates.push_back({tilt, j * grid.azimuth_step_deg, 0.0});
    }
  }
  parallel_for(result.candidates.size(), [&](std::size_t k) {
    auto& c = result.candidates[k];
    const auto pose = PanelPose::from_tilt_azimuth(deg2rad(c.tilt_deg), deg2rad(c.azimuth_deg));
    c.annual_kwh = annual_irradiation(orientation_site(spherical, context, pose), climate);
  });

  // Candidates are listed by tilt then azimuth, so a strict comparison keeps
  // the documented tie-break.
  const OrientationCandidate* best = &result.candidates.front();
  for (const auto& c : result.candidates)
    if (c.annual_kwh > best->annual_kwh) best = &c;

  result.best_tilt_deg = best->tilt_deg;
  result.best_azimuth_deg = best->azimuth_deg;
  result.best = PanelPose::from_tilt_azimuth(deg2rad(best->tilt_deg), deg2rad(best->azimuth_deg));
  result.best_annual_kwh = best->annual_kwh;
  result.best_view_r_ec = orientation_site(spherical, context, result.best).r_ec;
  result.current_annual_kwh = annual_irradiation(orientation_site(spherical, context, current), climate);
  result.gain_percent = result.current_annual_kwh > 0.0
                            ? 100.0 * (result.best_annual_kwh - result.current_annual_kwh) /
                                  result.current_annual_kwh
                            : 0.0;
  return result;
}

}  // namespace panelcast
