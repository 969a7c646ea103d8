#pragma once

#include <optional>

#include "panelcast/image.hpp"
#include "panelcast/projection.hpp"

namespace panelcast {

/// Binary sky visibility A(direction) over the camera frame, sampled per
/// pixel through the capture projection.
class SkyAperture {
 public:
  SkyAperture() = default;
  /// Throws format_error if the mask shape does not fit the projection.
  SkyAperture(Mask mask, ProjectionModel projection);

  /// Every direction the projection covers is sky.
  static SkyAperture full(int width, int height, ProjectionModel projection);

  /// Nearest-pixel lookup; 0 outside the modeled field of view.
  double sample(const Vec3& dir_cam) const;

  const Mask& mask() const { return mask_; }
  const ProjectionModel& projection() const { return projection_; }
  int width() const { return mask_.width; }
  int height() const { return mask_.height; }
  bool empty() const { return mask_.count() == 0; }

 private:
  Mask mask_;
  ProjectionModel projection_;
};

/// Pixels the projection maps to a direction (the image circle for fisheye).
Mask valid_pixels(int width, int height, const ProjectionModel& projection);

/// Stated constants of the heuristic segmenter; all overridable from the CLI.
struct SegmentationParams {
  /// Sky pixels must reach this fraction of the median luminance...
  double sky_luminance_ratio = 0.05;
  /// ...and have blue chromaticity b / (r + g + b) at least this.
  double blue_chromaticity = 0.36;
  /// Pixels brighter than this multiple of the median are sky regardless of
  /// color (sun disk, saturated circumsolar region).
  double bright_ratio = 50.0;
  /// Components smaller than this fraction of the hemisphere are dropped.
  double min_component_fraction = 0.005;
  int closing_radius = 3;
};

/// Heuristic sky segmentation: luminance/chromaticity threshold, removal of
/// small connected components, then morphological closing. An image with no
/// qualifying pixels yields an empty aperture (SVF 0).
SkyAperture segment_sky(const HdrImage& image, const ProjectionModel& projection,
                        const SegmentationParams& params = {});

/// Cosine-weighted visible-sky fraction over the hemisphere around
/// `normal_cam` (camera frame), by midpoint quadrature in the panel frame.
/// Normalized by the grid's own cosine sum so a full aperture gives 1.
double sky_view_factor(const SkyAperture& aperture, const Direction& normal_cam,
                       double grid_step_deg = 1.0);

/// Luminance-weighted centroid direction (camera frame) of the largest
/// connected region brighter than `ratio` x the median luminance; nullopt
/// when no region qualifies.
std::optional<Direction> detect_sun(const HdrImage& image, const ProjectionModel& projection,
                                    double ratio = 50.0);

struct GravityEstimate {
  Direction gravity;
  bool assumed_level;
};

/// IMU gravity from image metadata (normalized), or (0,0,-1) flagged as an
/// assumed level capture.
GravityEstimate gravity_from_metadata(const HdrImage& image);

}  // namespace panelcast
