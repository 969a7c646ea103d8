#include "panelcast/ephemeris.hpp"

#include <cmath>
#include <string>

#include "panelcast/error.hpp"

namespace panelcast {

void GeoTime::validate() const {
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) {
    fail(ErrorKind::range, "latitude " + std::to_string(latitude_deg) + " outside [-90, 90]");
  }
  if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0)) {
    fail(ErrorKind::range, "longitude " + std::to_string(longitude_deg) + " outside [-180, 180]");
  }
  const int y = year_of(instant);
  if (y < 1950 || y > 2100) {
    fail(ErrorKind::range, "instant " + format_instant(instant) +
                               " outside the ephemeris validity window 1950-2100");
  }
}

namespace {

struct SunState {
  double declination;
  double eot_min;
};

SunState sun_state(Instant t) {
  const double jd = static_cast<double>(seconds_since_epoch(t)) / 86400.0 + 2440587.5;
  const double T = (jd - 2451545.0) / 36525.0;

  const double L0 = std::fmod(280.46646 + T * (36000.76983 + 0.0003032 * T), 360.0);
  const double M = 357.52911 + T * (35999.05029 - 0.0001537 * T);
  const double e = 0.016708634 - T * (0.000042037 + 0.0000001267 * T);
  const double Mr = deg2rad(M);
  const double C = std::sin(Mr) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
                   std::sin(2.0 * Mr) * (0.019993 - 0.000101 * T) +
                   std::sin(3.0 * Mr) * 0.000289;
  const double true_long = L0 + C;
  const double omega = deg2rad(125.04 - 1934.136 * T);
  const double lambda = deg2rad(true_long - 0.00569 - 0.00478 * std::sin(omega));
  const double eps0 = 23.0 + (26.0 + (21.448 - T * (46.815 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
  const double eps = deg2rad(eps0 + 0.00256 * std::cos(omega));

  const double decl = std::asin(std::sin(eps) * std::sin(lambda));
  const double y = std::pow(std::tan(eps / 2.0), 2);
  const double L0r = deg2rad(L0);
  const double eot = 4.0 * rad2deg(y * std::sin(2.0 * L0r) - 2.0 * e * std::sin(Mr) +
                                   4.0 * e * y * std::sin(Mr) * std::cos(2.0 * L0r) -
                                   0.5 * y * y * std::sin(4.0 * L0r) -
                                   1.25 * e * e * std::sin(2.0 * Mr));
  return {decl, eot};
}

}  // namespace

SolarGeometry solar_geometry(Instant t) {
  const auto s = sun_state(t);
  return {s.declination, s.eot_min};
}

SolarPosition solar_position(const GeoTime& geo_time) {
  geo_time.validate();
  const auto s = sun_state(geo_time.instant);
  const std::int64_t secs = seconds_since_epoch(geo_time.instant);
  std::int64_t sod = secs % 86400;
  if (sod < 0) sod += 86400;
  const double utc_minutes = static_cast<double>(sod) / 60.0;
  const double tst = utc_minutes + s.eot_min + 4.0 * geo_time.longitude_deg;
  const double hour_angle = deg2rad(tst / 4.0 - 180.0);

  const double lat = deg2rad(geo_time.latitude_deg);
  const double cd = std::cos(s.declination);
  const double sd = std::sin(s.declination);
  const Vec3 enu(-cd * std::sin(hour_angle),
                 sd * std::cos(lat) - cd * std::sin(lat) * std::cos(hour_angle),
                 sd * std::sin(lat) + cd * std::cos(lat) * std::cos(hour_angle));
  return SolarPosition::from_direction(Direction(enu));
}

}  // namespace panelcast
