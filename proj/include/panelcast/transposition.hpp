#pragma once

#include <array>
#include <optional>
#include <vector>

#include "panelcast/aperture.hpp"
#include "panelcast/irradiance.hpp"

namespace panelcast {

/// F1/F2 brightening coefficients of the Perez tilted-surface model
/// (1990 all-sites composite), one row per clearness bin:
/// f11 f12 f13 f21 f22 f23.
const std::array<double, 6>& perez_transposition_row(int bin);

/// Sky diffuse irradiance on a tilted plane: isotropic, circumsolar and
/// horizon-band terms. 0 when dhi <= 0; isotropic only with the sun more
/// than 87.5 degrees from the zenith.
double perez_transposition_diffuse(double dni, double dhi, const SolarPosition& sun,
                                   const PanelPose& panel, int day_of_year);

/// Isotropic ground reflection: rho (dni cos z + dhi) (1 - cos tilt) / 2.
double e_ground(double dni, double dhi, const SolarPosition& sun, double tilt, double albedo);

enum class SvfSource { from_aperture, from_value };

struct TranspositionConfig {
  double albedo = 0.2;
  PanelPose panel;
  SvfSource svf_source = SvfSource::from_aperture;
  double svf_value = 1.0;  // used with from_value

  /// domain_error for albedo or svf outside [0, 1].
  void validate() const;
};

/// Sky input for the baseline: an aperture (SVF and sun visibility both
/// derived from it) or a bare SVF with the sun assumed visible.
class BaselineSky {
 public:
  static BaselineSky from_aperture(SkyAperture aperture, Rotation r_ec, const PanelPose& panel,
                                   double grid_step_deg = 1.0);
  static BaselineSky from_value(double svf);
  static BaselineSky from_config(const TranspositionConfig& config,
                                 const std::optional<SkyAperture>& aperture, const Rotation& r_ec,
                                 double grid_step_deg = 1.0);

  double svf() const { return svf_; }
  double sun_visibility(const SolarPosition& sun) const;

 private:
  std::optional<SkyAperture> aperture_;
  Rotation r_ec_;
  double svf_ = 1.0;
};

struct BaselineComponents {
  double beam = 0.0;
  double diffuse = 0.0;  // already multiplied by SVF
  double ground = 0.0;
  double total() const { return beam + diffuse + ground; }
};

/// dni A(s) max(0, n.s) + E_diffuse SVF + E_ground.
BaselineComponents baseline_components(const WeatherRecord& weather, const SolarPosition& sun,
                                       const BaselineSky& sky, const TranspositionConfig& config);
double baseline_total(const WeatherRecord& weather, const SolarPosition& sun,
                      const BaselineSky& sky, const TranspositionConfig& config);

/// Baseline over a weather series, mapped onto the forecast schema as
/// e_sun = beam, e_sky = diffuse, e_scene = ground.
std::vector<ForecastPoint> baseline_series(double latitude_deg, double longitude_deg,
                                           const WeatherSeries& weather, const BaselineSky& sky,
                                           const TranspositionConfig& config);

}  // namespace panelcast
