#include "panelcast/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "panelcast/error.hpp"

namespace panelcast {

SkyAperture::SkyAperture(Mask mask, ProjectionModel projection)
    : mask_(std::move(mask)), projection_(projection) {
  projection_.check_shape(mask_.width, mask_.height);
  for (auto& b : mask_.bits) b = b ? 1 : 0;
}

SkyAperture SkyAperture::full(int width, int height, ProjectionModel projection) {
  // Every pixel is sky; directions outside the field of view still sample 0
  // through the projection, and rim pixels whose centers fall outside the
  // image circle stay usable.
  Mask m(width, height);
  std::fill(m.bits.begin(), m.bits.end(), std::uint8_t{1});
  return SkyAperture(std::move(m), projection);
}

double SkyAperture::sample(const Vec3& dir_cam) const {
  if (mask_.width == 0) return 0.0;
  const auto p = projection_.project(dir_cam, mask_.width, mask_.height);
  if (!p) return 0.0;
  const int x = std::clamp(static_cast<int>(std::floor(p->u)), 0, mask_.width - 1);
  const int y = std::clamp(static_cast<int>(std::floor(p->v)), 0, mask_.height - 1);
  return mask_.at(x, y) ? 1.0 : 0.0;
}

Mask valid_pixels(int width, int height, const ProjectionModel& projection) {
  Mask m(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      m.at(x, y) = projection.unproject({x + 0.5, y + 0.5}, width, height) ? 1 : 0;
  return m;
}

namespace {

struct Component {
  std::vector<int> pixels;  // linear indices
};

/// 8-connected components of `mask`; equirectangular images wrap in u.
std::vector<Component> connected_components(const Mask& mask, bool wrap_u) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<int> label(mask.bits.size(), -1);
  std::vector<Component> out;
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(mask.bits.size()); ++start) {
    if (!mask.bits[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)] >= 0)
      continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    stack.assign(1, start);
    label[static_cast<std::size_t>(start)] = id;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      out.back().pixels.push_back(idx);
      const int x = idx % w;
      const int y = idx / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          int nx = x + dx;
          const int ny = y + dy;
          if (ny < 0 || ny >= h) continue;
          if (nx < 0 || nx >= w) {
            if (!wrap_u) continue;
            nx = (nx + w) % w;
          }
          const int n = ny * w + nx;
          if (mask.bits[static_cast<std::size_t>(n)] && label[static_cast<std::size_t>(n)] < 0) {
            label[static_cast<std::size_t>(n)] = id;
            stack.push_back(n);
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> out;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) out.emplace_back(dx, dy);
  return out;
}

/// Dilation (`erode` false) or erosion with a disk; off-image neighbors are
/// ignored so neither operation is biased by the frame border.
Mask morph(const Mask& in, int radius, bool erode, bool wrap_u) {
  const auto offsets = disk_offsets(radius);
  Mask out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      bool v = erode;
      for (const auto& [dx, dy] : offsets) {
        int nx = x + dx;
        const int ny = y + dy;
        if (ny < 0 || ny >= in.height) continue;
        if (nx < 0 || nx >= in.width) {
          if (!wrap_u) continue;
          nx = (nx + in.width) % in.width;
        }
        const bool s = in.at(nx, ny) != 0;
        if (erode && !s) {
          v = false;
          break;
        }
        if (!erode && s) {
          v = true;
          break;
        }
      }
      out.at(x, y) = v ? 1 : 0;
    }
  }
  return out;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

double median_luminance(const HdrImage& image, const Mask& domain) {
  std::vector<double> lum;
  lum.reserve(domain.bits.size());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      if (domain.at(x, y)) lum.push_back(image.luminance(x, y));
  return median_of(std::move(lum));
}

}  // namespace

SkyAperture segment_sky(const HdrImage& image, const ProjectionModel& projection,
                        const SegmentationParams& params) {
  projection.check_shape(image.width(), image.height());
  const bool wrap = projection.kind == ProjectionKind::equirectangular;
  const Mask domain = valid_pixels(image.width(), image.height(), projection);
  const double median = median_luminance(image, domain);

  Mask seed(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!domain.at(x, y)) continue;
      const float* p = image.pixel(x, y);
      const double sum = static_cast<double>(p[0]) + p[1] + p[2];
      if (!(sum > 0.0)) continue;
      const double lum = image.luminance(x, y);
      const bool blue_sky =
          lum >= params.sky_luminance_ratio * median && p[2] / sum >= params.blue_chromaticity;
      const bool very_bright = median > 0.0 && lum >= params.bright_ratio * median;
      seed.at(x, y) = (blue_sky || very_bright) ? 1 : 0;
    }
  }

  // Hemisphere pixel area: the image circle for fisheye, half the frame for
  // a full sphere.
  const double hemisphere_px =
      wrap ? 0.5 * static_cast<double>(domain.bits.size()) : static_cast<double>(domain.count());
  const double min_area = params.min_component_fraction * hemisphere_px;
  Mask kept(image.width(), image.height());
  for (const auto& comp : connected_components(seed, wrap)) {
    if (static_cast<double>(comp.pixels.size()) < min_area) continue;
    for (const int idx : comp.pixels) kept.bits[static_cast<std::size_t>(idx)] = 1;
  }

  Mask closed = kept;
  if (params.closing_radius > 0) {
    closed = morph(morph(kept, params.closing_radius, false, wrap), params.closing_radius, true, wrap);
  }
  for (std::size_t i = 0; i < closed.bits.size(); ++i) closed.bits[i] &= domain.bits[i];
  return SkyAperture(std::move(closed), projection);
}

double sky_view_factor(const SkyAperture& aperture, const Direction& normal_cam,
                       double grid_step_deg) {
  const HemisphereGrid grid(grid_step_deg);
  const Mat3 to_cam = Rotation::with_optical_axis(normal_cam).matrix();
  double visible = 0.0;
  double total = 0.0;
  for (const auto& cell : grid.cells()) {
    const double w = cell.cos_zenith * cell.solid_angle;
    total += w;
    visible += w * aperture.sample(to_cam * cell.dir);
  }
  return visible / total;
}

std::optional<Direction> detect_sun(const HdrImage& image, const ProjectionModel& projection,
                                    double ratio) {
  projection.check_shape(image.width(), image.height());
  const Mask domain = valid_pixels(image.width(), image.height(), projection);
  const double threshold = ratio * median_luminance(image, domain);
  Mask bright(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      bright.at(x, y) = domain.at(x, y) && image.luminance(x, y) > threshold ? 1 : 0;

  const auto comps =
      connected_components(bright, projection.kind == ProjectionKind::equirectangular);
  const Component* best = nullptr;
  double best_energy = 0.0;
  for (const auto& c : comps) {
    double energy = 0.0;
    for (const int idx : c.pixels) energy += image.luminance(idx % image.width(), idx / image.width());
    if (!best || c.pixels.size() > best->pixels.size() ||
        (c.pixels.size() == best->pixels.size() && energy > best_energy)) {
      best = &c;
      best_energy = energy;
    }
  }
  if (!best) return std::nullopt;

  Vec3 acc = Vec3::Zero();
  for (const int idx : best->pixels) {
    const int x = idx % image.width();
    const int y = idx / image.width();
    const auto d = projection.unproject({x + 0.5, y + 0.5}, image.width(), image.height());
    if (d) acc += image.luminance(x, y) * *d;
  }
  if (acc.norm() < 1e-300) return std::nullopt;
  return Direction(acc);
}

GravityEstimate gravity_from_metadata(const HdrImage& image) {
  if (image.metadata.gravity) return {Direction(*image.metadata.gravity), false};
  return {Direction(0.0, 0.0, -1.0), true};
}

}  // namespace panelcast
