#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "panelcast/aperture.hpp"
#include "panelcast/scene_function.hpp"
#include "panelcast/sky_model.hpp"
#include "panelcast/weather.hpp"

namespace panelcast {

/// Panel orientation in the Earth frame. The normal must not point below the
/// horizon (geometry_error).
class PanelPose {
 public:
  PanelPose() = default;
  explicit PanelPose(const Direction& normal);
  /// n = (sin t sin a, sin t cos a, cos t), azimuth clockwise from North.
  static PanelPose from_tilt_azimuth(double tilt, double azimuth);

  const Direction& normal() const { return normal_; }
  double tilt() const { return normal_.zenith(); }
  double azimuth() const { return normal_.azimuth(); }

 private:
  Direction normal_;
};

struct ForecastPoint {
  Instant instant{};
  double e_sun = 0.0;  // W/m^2
  double e_sky = 0.0;
  double e_scene = 0.0;
  double e_total = 0.0;

  static ForecastPoint make(Instant t, double sun, double sky, double scene) {
    return {t, sun, sky, scene, sun + sky + scene};
  }
};

/// Everything needed to forecast one panel.
struct Site {
  SkyAperture aperture;
  Rotation r_ec;  // camera -> Earth
  PanelPose panel;
  std::shared_ptr<const ScenePredictor> predictor;  // null: no scene term
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double grid_step_deg = 1.0;
};

/// dni * A(s) * max(0, n.s); 0 with the sun at or below the horizon.
double e_sun(double dni, const SkyAperture& aperture, const Rotation& r_ec, const Direction& n,
             const SolarPosition& sun);

/// Per-cell quadrature weights A(R^T w) max(0, n.w) dw over the Earth-frame
/// upper hemisphere. Built once per site; e_sky is then a weighted sum of
/// sky radiance in a fixed cell order.
class SkyWeights {
 public:
  SkyWeights(const SkyAperture& aperture, const Rotation& r_ec, const Direction& n,
             double grid_step_deg = 1.0);

  double step_deg() const { return step_deg_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Integral of L_sky weighted by the cells; the sky's own normalization
  /// grid is independent of this one.
  double integrate(const SkyRadianceModel& sky) const;
  /// Dot product with per-cell values in grid order (cumulative sky).
  double dot(const std::vector<double>& per_cell) const;

 private:
  double step_deg_;
  std::vector<Vec3> dirs_;
  std::vector<double> weights_;
};

/// Quadrature of L_sky(w) A(R^T w) max(0, n.w) over the sky dome on the
/// sky model's grid.
double e_sky(const SkyRadianceModel& sky, const SkyAperture& aperture, const Rotation& r_ec,
             const Direction& n);

/// R = ghi / ghi_clear when the record carries ghi_clear, else 1. A zero
/// ghi_clear with the sun up is a domain_error.
double clear_sky_ratio(const WeatherRecord& weather, const SolarPosition& sun);

/// predictor(sun) * R; 0 without a predictor or with the sun down.
double e_scene(const ScenePredictor* predictor, const SolarPosition& sun,
               const WeatherRecord& weather);

/// One point per record. Records with the sun at or below the horizon, or
/// no diffuse light for the sky term, contribute zero to the affected
/// components.
std::vector<ForecastPoint> forecast_series(const Site& site, const WeatherSeries& weather);

/// Trapezoidal integral of e_total over the points, kWh/m^2.
double integrate_kwh(const std::vector<ForecastPoint>& points);

/// Site-independent part of an annual integration: per-record sun data and
/// the time-integrated sky radiance per hemisphere cell (J/m^2/sr). Reusing
/// it across candidate panels makes each evaluation a dot product.
struct ClimateIntegral {
  struct SunSample {
    SolarPosition sun;
    Vec3 dir;
    double tau = 0.0;  // trapezoid weight, s
    double dni = 0.0;
    double ratio = 1.0;  // clear-sky scaling R
  };
  double grid_step_deg = 1.0;
  std::vector<SunSample> sun_samples;  // daytime records only
  std::vector<double> sky;             // sum_t tau_t L_t(cell)
};

/// Throws format_error on gaps larger than twice the nominal step.
ClimateIntegral integrate_climate(double latitude_deg, double longitude_deg,
                                  const WeatherSeries& tmy, double grid_step_deg = 1.0);

/// Annual irradiation, kWh/m^2. Both overloads share one code path.
double annual_irradiation(const Site& site, const ClimateIntegral& climate);
double annual_irradiation(const Site& site, const WeatherSeries& tmy);

/// Forecast CSV: `timestamp,e_sun_wm2,e_sky_wm2,e_scene_wm2,e_total_wm2`
/// with an optional trailing `model` column, 6 significant digits.
std::string format_forecast(const std::vector<ForecastPoint>& points,
                            const std::string& model_tag = "");
std::vector<ForecastPoint> parse_forecast(const std::string& text,
                                          const std::string& source_name = "forecast");
void save_forecast(const std::filesystem::path& path, const std::vector<ForecastPoint>& points,
                   const std::string& model_tag = "");
std::vector<ForecastPoint> load_forecast(const std::filesystem::path& path);

}  // namespace panelcast
