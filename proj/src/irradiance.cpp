#include "panelcast/irradiance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"
#include "panelcast/parallel.hpp"

namespace panelcast {

namespace {

const char* const kForecastHeader = "timestamp,e_sun_wm2,e_sky_wm2,e_scene_wm2,e_total_wm2";

std::vector<double> trapezoid_weights(const std::vector<Instant>& times) {
  std::vector<double> tau(times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double dt = static_cast<double>((times[i + 1] - times[i]).count());
    tau[i] += 0.5 * dt;
    tau[i + 1] += 0.5 * dt;
  }
  return tau;
}

void check_gaps(const WeatherSeries& tmy) {
  tmy.check_monotone();
  if (tmy.records.size() < 2) return;
  WeatherSeries copy;
  copy.records = tmy.records;
  copy.update_step();
  const auto limit = 2 * copy.nominal_step;
  for (std::size_t i = 1; i < tmy.records.size(); ++i) {
    const auto dt = (tmy.records[i].instant - tmy.records[i - 1].instant).count();
    if (dt > limit) {
      fail(ErrorKind::format, "weather gap of " + std::to_string(dt) + " s before " +
                                  format_instant(tmy.records[i].instant) +
                                  " exceeds twice the nominal step (" +
                                  std::to_string(copy.nominal_step) + " s)");
    }
  }
}

}  // namespace

PanelPose::PanelPose(const Direction& normal) : normal_(normal) {
  if (normal.z() < -1e-12) {
    fail(ErrorKind::geometry, "panel normal " + normal.to_string() + " points below the horizon");
  }
}

PanelPose PanelPose::from_tilt_azimuth(double tilt, double azimuth) {
  if (!(tilt >= 0.0 && tilt <= kPi / 2.0 + 1e-12)) {
    fail(ErrorKind::domain, "panel tilt must be in [0, 90] degrees");
  }
  return PanelPose(Direction::from_angles(tilt, azimuth));
}

double e_sun(double dni, const SkyAperture& aperture, const Rotation& r_ec, const Direction& n,
             const SolarPosition& sun) {
  if (!sun.above_horizon() || dni <= 0.0) return 0.0;
  const Vec3 s = sun.direction().vec();
  const double cosine = n.vec().dot(s);
  if (cosine <= 0.0) return 0.0;
  const Vec3 s_cam = r_ec.matrix().transpose() * s;
  return dni * aperture.sample(s_cam) * cosine;
}

SkyWeights::SkyWeights(const SkyAperture& aperture, const Rotation& r_ec, const Direction& n,
                       double grid_step_deg)
    : step_deg_(grid_step_deg) {
  const HemisphereGrid grid(grid_step_deg);
  const Mat3 to_cam = r_ec.matrix().transpose();
  dirs_.reserve(grid.cells().size());
  weights_.reserve(grid.cells().size());
  for (const auto& cell : grid.cells()) {
    dirs_.push_back(cell.dir);
    const double cosine = n.vec().dot(cell.dir);
    double w = 0.0;
    if (cosine > 0.0) w = aperture.sample(to_cam * cell.dir) * cosine * cell.solid_angle;
    weights_.push_back(w);
  }
}

double SkyWeights::integrate(const SkyRadianceModel& sky) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) sum += weights_[i] * sky.radiance(dirs_[i]);
  }
  return sum;
}

double SkyWeights::dot(const std::vector<double>& per_cell) const {
  if (per_cell.size() != weights_.size()) {
    fail(ErrorKind::config, "cumulative sky grid does not match the site grid");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) sum += weights_[i] * per_cell[i];
  return sum;
}

double e_sky(const SkyRadianceModel& sky, const SkyAperture& aperture, const Rotation& r_ec,
             const Direction& n) {
  return SkyWeights(aperture, r_ec, n, sky.grid_step_deg()).integrate(sky);
}

double clear_sky_ratio(const WeatherRecord& weather, const SolarPosition& sun) {
  if (!weather.ghi_clear) return 1.0;
  if (*weather.ghi_clear == 0.0) {
    if (sun.above_horizon()) {
      fail(ErrorKind::domain, "clear-sky GHI is 0 at " + format_instant(weather.instant) +
                                  " with the sun above the horizon");
    }
    return 0.0;
  }
  return weather.ghi / *weather.ghi_clear;
}

double e_scene(const ScenePredictor* predictor, const SolarPosition& sun,
               const WeatherRecord& weather) {
  if (!predictor || !sun.above_horizon()) return 0.0;
  return predictor->predict(sun) * clear_sky_ratio(weather, sun);
}

std::vector<ForecastPoint> forecast_series(const Site& site, const WeatherSeries& weather) {
  weather.check_monotone();
  const SkyWeights weights(site.aperture, site.r_ec, site.panel.normal(), site.grid_step_deg);
  std::vector<ForecastPoint> out(weather.records.size());
  parallel_for(weather.records.size(), [&](std::size_t i) {
    const auto& rec = weather.records[i];
    const auto sun = solar_position({site.latitude_deg, site.longitude_deg, rec.instant});
    if (!sun.above_horizon()) {
      out[i] = ForecastPoint::make(rec.instant, 0.0, 0.0, 0.0);
      return;
    }
    const double sun_term = e_sun(rec.dni, site.aperture, site.r_ec, site.panel.normal(), sun);
    double sky_term = 0.0;
    if (rec.dhi > 0.0) {
      const auto sky = build_sky(rec.dni, rec.dhi, sun, day_of_year(rec.instant), site.grid_step_deg);
      sky_term = weights.integrate(sky);
    }
    const double scene_term = e_scene(site.predictor.get(), sun, rec);
    out[i] = ForecastPoint::make(rec.instant, sun_term, sky_term, scene_term);
  });
  return out;
}

double integrate_kwh(const std::vector<ForecastPoint>& points) {
  double joules = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dt = static_cast<double>((points[i + 1].instant - points[i].instant).count());
    joules += 0.5 * dt * (points[i].e_total + points[i + 1].e_total);
  }
  return joules / 3.6e6;
}

ClimateIntegral integrate_climate(double latitude_deg, double longitude_deg,
                                  const WeatherSeries& tmy, double grid_step_deg) {
  check_gaps(tmy);
  ClimateIntegral climate;
  climate.grid_step_deg = grid_step_deg;
  const HemisphereGrid grid(grid_step_deg);
  climate.sky.assign(grid.cells().size(), 0.0);

  std::vector<Instant> times;
  times.reserve(tmy.records.size());
  for (const auto& r : tmy.records) times.push_back(r.instant);
  const auto tau = trapezoid_weights(times);

  for (std::size_t i = 0; i < tmy.records.size(); ++i) {
    const auto& rec = tmy.records[i];
    const auto sun = solar_position({latitude_deg, longitude_deg, rec.instant});
    if (!sun.above_horizon() || tau[i] == 0.0) continue;
    ClimateIntegral::SunSample sample;
    sample.sun = sun;
    sample.dir = sun.direction().vec();
    sample.tau = tau[i];
    sample.dni = rec.dni;
    sample.ratio = clear_sky_ratio(rec, sun);
    climate.sun_samples.push_back(sample);
    if (rec.dhi > 0.0) {
      const auto sky = build_sky(rec.dni, rec.dhi, sun, day_of_year(rec.instant), grid_step_deg);
      const auto& cells = grid.cells();
      for (std::size_t c = 0; c < cells.size(); ++c) climate.sky[c] += tau[i] * sky.radiance(cells[c].dir);
    }
  }
  return climate;
}

double annual_irradiation(const Site& site, const ClimateIntegral& climate) {
  const SkyWeights weights(site.aperture, site.r_ec, site.panel.normal(), climate.grid_step_deg);
  double joules = weights.dot(climate.sky);
  const Mat3 to_cam = site.r_ec.matrix().transpose();
  const Vec3& n = site.panel.normal().vec();
  for (const auto& s : climate.sun_samples) {
    const double cosine = n.dot(s.dir);
    if (cosine > 0.0 && s.dni > 0.0) joules += s.tau * s.dni * site.aperture.sample(to_cam * s.dir) * cosine;
    if (site.predictor) joules += s.tau * site.predictor->predict(s.sun) * s.ratio;
  }
  return joules / 3.6e6;
}

double annual_irradiation(const Site& site, const WeatherSeries& tmy) {
  return annual_irradiation(
      site, integrate_climate(site.latitude_deg, site.longitude_deg, tmy, site.grid_step_deg));
}

std::string format_forecast(const std::vector<ForecastPoint>& points, const std::string& model_tag) {
  std::string out = kForecastHeader;
  if (!model_tag.empty()) out += ",model";
  out += '\n';
  for (const auto& p : points) {
    out += format_instant(p.instant);
    for (const double v : {p.e_sun, p.e_sky, p.e_scene, p.e_total}) out += ',' + format_g6(v);
    if (!model_tag.empty()) out += ',' + model_tag;
    out += '\n';
  }
  return out;
}

std::vector<ForecastPoint> parse_forecast(const std::string& text, const std::string& source_name) {
  const auto lines = split(text, '\n');
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) fail(ErrorKind::parse, source_name + ": missing header line");
  const std::string header = trim(lines[first]);
  const bool tagged = header == std::string(kForecastHeader) + ",model";
  if (!tagged && header != kForecastHeader) {
    fail(ErrorKind::parse, source_name + ": expected header '" + kForecastHeader + "'");
  }
  std::vector<ForecastPoint> points;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(i + 1);
    const auto fields = split(line, ',');
    if (fields.size() != (tagged ? 6u : 5u)) fail(ErrorKind::parse, where + ": wrong field count");
    ForecastPoint p;
    try {
      p.instant = parse_instant(fields[0]);
      p.e_sun = parse_double(fields[1], "e_sun_wm2");
      p.e_sky = parse_double(fields[2], "e_sky_wm2");
      p.e_scene = parse_double(fields[3], "e_scene_wm2");
      p.e_total = parse_double(fields[4], "e_total_wm2");
    } catch (const Error& e) {
      fail(ErrorKind::parse, where + ": " + e.what());
    }
    points.push_back(p);
  }
  return points;
}

void save_forecast(const std::filesystem::path& path, const std::vector<ForecastPoint>& points,
                   const std::string& model_tag) {
  write_file_atomic(path, format_forecast(points, model_tag));
}

std::vector<ForecastPoint> load_forecast(const std::filesystem::path& path) {
  return parse_forecast(read_file(path), path.string());
}

}  // namespace panelcast
