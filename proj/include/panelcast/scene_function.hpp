#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "panelcast/aperture.hpp"
#include "panelcast/ephemeris.hpp"
#include "panelcast/weather.hpp"

namespace panelcast {

/// Scene irradiance (W/m^2) as a function of sun position on a 36 x 144
/// grid of 2.5 degree bins: rows are sun zenith [0, 90), columns sun azimuth
/// [0, 360) clockwise from North. Each value belongs to its bin center
/// (zenith 1.25, 3.75, ..., 88.75; azimuth 1.25, ..., 358.75).
class SceneIrradianceFunction {
 public:
  static constexpr int kRows = 36;
  static constexpr int kCols = 144;
  static constexpr double kBinDeg = 2.5;
  static constexpr int kSize = kRows * kCols;

  SceneIrradianceFunction() : values_(kSize, 0.0) {}
  /// Throws format_error unless there are exactly 5184 finite, non-negative
  /// values (row-major).
  explicit SceneIrradianceFunction(std::vector<double> values);

  double at(int row, int col) const { return values_[static_cast<std::size_t>(row * kCols + col)]; }
  double& at(int row, int col) { return values_[static_cast<std::size_t>(row * kCols + col)]; }
  const std::vector<double>& values() const { return values_; }

  static double row_zenith(int row) { return deg2rad((row + 0.5) * kBinDeg); }
  static double col_azimuth(int col) { return deg2rad((col + 0.5) * kBinDeg); }

  /// Bilinear interpolation between bin centers, wrapping in azimuth and
  /// clamping in zenith to the outermost rows; 0 for a sun at or below the
  /// horizon.
  double interpolate(const SolarPosition& sun) const;

 private:
  std::vector<double> values_;
};

/// Text form: one `#` header line naming the bin convention, then 36 lines
/// of 144 comma-separated values.
std::string format_scene_function(const SceneIrradianceFunction& f);
SceneIrradianceFunction parse_scene_function(const std::string& text,
                                             const std::string& source_name = "scene function");
void save_scene_function(const std::filesystem::path& path, const SceneIrradianceFunction& f);
SceneIrradianceFunction load_scene_function(const std::filesystem::path& path);

/// Predicts clear-sky scene irradiance for a sun position.
class ScenePredictor {
 public:
  virtual ~ScenePredictor() = default;
  virtual double predict(const SolarPosition& sun) const = 0;
};

/// Predictor backed by a tabulated scene-irradiance function.
class GridScenePredictor final : public ScenePredictor {
 public:
  explicit GridScenePredictor(SceneIrradianceFunction f) : f_(std::move(f)) {}
  double predict(const SolarPosition& sun) const override { return f_.interpolate(sun); }
  const SceneIrradianceFunction& function() const { return f_; }

 private:
  SceneIrradianceFunction f_;
};

/// Capture-time context for the analytic predictor.
struct CaptureWeather {
  WeatherRecord record;
  SolarPosition sun;
};

/// Single-albedo canyon model: every non-sky direction is a Lambertian
/// reflector lit by the clear-sky global irradiance,
///   E(bin) = albedo * GHI_clear(bin) * F_scene,
///   F_scene = (1/pi) * integral (1 - A) max(0, n . w) dw = 1 - SVF.
/// The clear-sky template is scaled to the capture-time clear-sky GHI when
/// `capture` carries one.
SceneIrradianceFunction analytic_canyon_predictor(const SkyAperture& aperture,
                                                  const Rotation& r_ec, const Direction& normal,
                                                  double albedo,
                                                  const std::optional<CaptureWeather>& capture = {},
                                                  double grid_step_deg = 1.0);

/// Cumulative explained-variance ratios of PCA on mean-centered 5184-vectors,
/// one entry per component (as many as functions). Zero total variance
/// reports 1.0 everywhere. Needs at least two functions (domain_error).
std::vector<double> pca_explained_variance(const std::vector<SceneIrradianceFunction>& dataset);

}  // namespace panelcast
