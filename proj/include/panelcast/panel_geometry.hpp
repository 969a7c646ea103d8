#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panelcast/aperture.hpp"
#include "panelcast/image.hpp"
#include "panelcast/irradiance.hpp"
#include "panelcast/projection.hpp"

namespace panelcast {

/// Two or four panel corners in pixel coordinates of an image of the given
/// size and projection. Four corners may come in any order.
struct CornerObservation {
  std::vector<PixelPoint> corners;
  ProjectionModel projection;
  int width = 0;
  int height = 0;

  /// geometry_error unless there are 2 or 4 pairwise distinct corners that
  /// back-project to valid rays.
  void validate() const;
};

/// Corner file: one `u v` pair per line, `#` comments.
std::vector<PixelPoint> parse_corners(const std::string& text, const std::string& source_name = "corners");
std::vector<PixelPoint> load_corners(const std::filesystem::path& path);

struct PanelNormalEstimate {
  Direction normal;  // camera frame
  /// Four corners only: deviation of the two vanishing directions from
  /// perpendicular, degrees.
  double residual_deg = 0.0;
  std::optional<std::string> warning;
};

/// Four corners: vanishing points of opposite edges on a 90-degree virtual
/// perspective view, back-projected and crossed. Two corners: cross product
/// of their back-projected rays, which needs the camera in the panel plane.
/// The sign makes the normal point against gravity; a normal exactly on the
/// horizon faces the camera.
PanelNormalEstimate panel_normal_from_corners(const CornerObservation& obs,
                                              const Direction& gravity_cam = Direction(0, 0, -1));

/// Fisheye view (180 degrees, `size` pixels square) of an equirectangular
/// image around the optical axis given by `orientation` (view camera ->
/// sphere camera), with bilinear resampling. format_error for non-spherical
/// input.
HdrImage extract_view(const HdrImage& spherical, const Rotation& orientation, int size = 0);

/// Inputs shared by every candidate orientation.
struct OrientationContext {
  Rotation r_ec;  // spherical camera -> Earth
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double albedo = 0.2;  // analytic scene predictor
  SegmentationParams segmentation;
  int view_size = 0;  // 0: spherical image height
  double grid_step_deg = 1.0;
};

struct SearchGrid {
  double tilt_step_deg = 5.0;
  double azimuth_step_deg = 10.0;
  double max_tilt_deg = 90.0;
};

/// Forecast site for a panel with normal `panel` seen from the spherical
/// capture: extract_view -> segment_sky -> analytic predictor.
Site orientation_site(const HdrImage& spherical, const OrientationContext& context,
                      const PanelPose& panel);

struct OrientationCandidate {
  double tilt_deg = 0.0;
  double azimuth_deg = 0.0;
  double annual_kwh = 0.0;
};

struct OrientationResult {
  PanelPose best;
  double best_tilt_deg = 0.0;
  double best_azimuth_deg = 0.0;
  Rotation best_view_r_ec;  // view camera -> Earth for the best panel
  double best_annual_kwh = 0.0;
  double current_annual_kwh = 0.0;
  double gain_percent = 0.0;
  std::vector<OrientationCandidate> candidates;
};

/// Exhaustive search over tilt in [0, max] and azimuth in [0, 360); ties go
/// to the smallest tilt, then the smallest azimuth.
OrientationResult best_orientation(const HdrImage& spherical, const OrientationContext& context,
                                   const WeatherSeries& tmy, const SearchGrid& grid,
                                   const PanelPose& current);

}  // namespace panelcast
