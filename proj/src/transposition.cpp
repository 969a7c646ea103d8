#include "panelcast/transposition.hpp"

#include <algorithm>
#include <cmath>

#include "panelcast/error.hpp"
#include "panelcast/sky_model.hpp"

namespace panelcast {

namespace {

constexpr std::array<std::array<double, 6>, 8> kTranspositionTable = {{
    {-0.0083117, 0.5877285, -0.0620636, -0.0596012, 0.0721249, -0.0220216},
    {0.1299457, 0.6825954, -0.1513752, -0.0189325, 0.0659650, -0.0288748},
    {0.3296958, 0.4868735, -0.2210958, 0.0554140, -0.0639588, -0.0260542},
    {0.5682053, 0.1874525, -0.2951290, 0.1088631, -0.1519229, -0.0139754},
    {0.8730280, -0.3920403, -0.3616149, 0.2255647, -0.4620442, 0.0012448},
    {1.1326077, -1.2367284, -0.4118494, 0.2877813, -0.8230357, 0.0558651},
    {1.0601591, -1.5999137, -0.3589221, 0.2642124, -1.1272340, 0.1310694},
    {0.6777470, -0.3272588, -0.2504286, 0.1561313, -1.3765031, 0.2506212},
}};

const double kCos85 = std::cos(deg2rad(85.0));

}  // namespace

const std::array<double, 6>& perez_transposition_row(int bin) {
  if (bin < 0 || bin >= static_cast<int>(kTranspositionTable.size())) {
    fail(ErrorKind::range, "clearness bin " + std::to_string(bin) + " out of range");
  }
  return kTranspositionTable[static_cast<std::size_t>(bin)];
}

double perez_transposition_diffuse(double dni, double dhi, const SolarPosition& sun,
                                   const PanelPose& panel, int day_of_year) {
  if (!(dhi > 0.0)) return 0.0;
  const double cos_tilt = std::cos(panel.tilt());
  const double isotropic = dhi * (1.0 + cos_tilt) / 2.0;
  if (rad2deg(sun.zenith) > 87.5) return isotropic;

  const auto idx = condition_indices(std::max(dni, 0.0), dhi, sun, day_of_year);
  const auto& f = perez_transposition_row(clearness_bin(idx.clearness));
  const double z = sun.zenith;
  const double f1 = std::max(0.0, f[0] + f[1] * idx.brightness + f[2] * z);
  const double f2 = f[3] + f[4] * idx.brightness + f[5] * z;
  const double cos_aoi = panel.normal().vec().dot(sun.direction().vec());
  const double a = std::max(0.0, cos_aoi);
  const double b = std::max(kCos85, std::cos(z));
  return dhi * ((1.0 - f1) * (1.0 + cos_tilt) / 2.0 + f1 * a / b + f2 * std::sin(panel.tilt()));
}

double e_ground(double dni, double dhi, const SolarPosition& sun, double tilt, double albedo) {
  if (!(albedo >= 0.0 && albedo <= 1.0)) fail(ErrorKind::domain, "albedo must be in [0, 1]");
  const double ghi = dni * std::max(0.0, std::cos(sun.zenith)) + dhi;
  return albedo * ghi * (1.0 - std::cos(tilt)) / 2.0;
}

void TranspositionConfig::validate() const {
  if (!(albedo >= 0.0 && albedo <= 1.0)) fail(ErrorKind::domain, "albedo must be in [0, 1]");
  if (svf_source == SvfSource::from_value && !(svf_value >= 0.0 && svf_value <= 1.0)) {
    fail(ErrorKind::domain, "sky view factor must be in [0, 1]");
  }
}

BaselineSky BaselineSky::from_aperture(SkyAperture aperture, Rotation r_ec, const PanelPose& panel,
                                       double grid_step_deg) {
  BaselineSky s;
  s.svf_ = sky_view_factor(aperture, r_ec.inverse().apply(panel.normal()), grid_step_deg);
  s.aperture_ = std::move(aperture);
  s.r_ec_ = r_ec;
  return s;
}

BaselineSky BaselineSky::from_value(double svf) {
  if (!(svf >= 0.0 && svf <= 1.0)) fail(ErrorKind::domain, "sky view factor must be in [0, 1]");
  BaselineSky s;
  s.svf_ = svf;
  return s;
}

BaselineSky BaselineSky::from_config(const TranspositionConfig& config,
                                     const std::optional<SkyAperture>& aperture,
                                     const Rotation& r_ec, double grid_step_deg) {
  config.validate();
  if (config.svf_source == SvfSource::from_value) return from_value(config.svf_value);
  if (!aperture) fail(ErrorKind::config, "SVF from aperture needs an aperture");
  return from_aperture(*aperture, r_ec, config.panel, grid_step_deg);
}

double BaselineSky::sun_visibility(const SolarPosition& sun) const {
  if (!aperture_) return 1.0;
  return aperture_->sample(r_ec_.matrix().transpose() * sun.direction().vec());
}

BaselineComponents baseline_components(const WeatherRecord& weather, const SolarPosition& sun,
                                       const BaselineSky& sky, const TranspositionConfig& config) {
  BaselineComponents c;
  if (!sun.above_horizon()) return c;
  const double cosine = config.panel.normal().vec().dot(sun.direction().vec());
  if (cosine > 0.0 && weather.dni > 0.0) c.beam = weather.dni * sky.sun_visibility(sun) * cosine;
  c.diffuse = perez_transposition_diffuse(weather.dni, weather.dhi, sun, config.panel,
                                          day_of_year(weather.instant)) *
              sky.svf();
  c.ground = e_ground(weather.dni, weather.dhi, sun, config.panel.tilt(), config.albedo);
  return c;
}

double baseline_total(const WeatherRecord& weather, const SolarPosition& sun,
                      const BaselineSky& sky, const TranspositionConfig& config) {
  return baseline_components(weather, sun, sky, config).total();
}

std::vector<ForecastPoint> baseline_series(double latitude_deg, double longitude_deg,
                                           const WeatherSeries& weather, const BaselineSky& sky,
                                           const TranspositionConfig& config) {
  weather.check_monotone();
  std::vector<ForecastPoint> out;
  out.reserve(weather.records.size());
  for (const auto& rec : weather.records) {
    const auto sun = solar_position({latitude_deg, longitude_deg, rec.instant});
    const auto c = baseline_components(rec, sun, sky, config);
    out.push_back(ForecastPoint::make(rec.instant, c.beam, c.diffuse, c.ground));
  }
  return out;
}

}  // namespace panelcast
