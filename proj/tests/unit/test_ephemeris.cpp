#include "doctest.h"
#include "panelcast/ephemeris.hpp"
#include "test_support.hpp"

using namespace panelcast;

namespace {

struct Reference {
  double lat, lon;
  const char* when;
  double zenith_deg, azimuth_deg;
};

// Geometric sun positions from an independent SPA implementation (delta T = 69 s).
const Reference kReference[] = {
    {40.7128, -74.006, "2025-06-30T17:00:00Z", 17.591390, 180.135874},
    {40.7128, -74.006, "2025-06-30T12:30:00Z", 58.426807, 85.439192},
    {-33.8688, 151.2093, "1955-01-15T03:00:00Z", 17.590913, 312.117882},
    {51.4779, 0.0, "2099-12-01T11:45:00Z", 73.362430, 179.034010},
    {64.1466, -21.9426, "2030-03-20T20:10:00Z", 93.700862, 277.906126},
    {0.0, 0.0, "2025-03-20T12:07:00Z", 0.103016, 60.507497},
};

SolarPosition sun_at(double lat, double lon, const char* when) {
  return solar_position(GeoTime{lat, lon, parse_instant(when)});
}

}  // namespace

TEST_CASE("sun position matches reference ephemeris within 0.05 degrees") {
  for (const auto& r : kReference) {
    CAPTURE(r.when);
    const auto s = sun_at(r.lat, r.lon, r.when);
    CHECK(std::abs(testing::deg(s.zenith) - r.zenith_deg) < 0.05);
    const auto ref = Direction::from_angles(deg2rad(r.zenith_deg), deg2rad(r.azimuth_deg));
    // Azimuth is ill-conditioned near the zenith; compare full directions.
    CHECK(testing::deg(s.direction().angle_to(ref)) < 0.05);
    if (r.zenith_deg > 5.0) {
      CHECK(std::abs(std::remainder(testing::deg(s.azimuth) - r.azimuth_deg, 360.0)) < 0.05);
    }
  }
}

TEST_CASE("sun is near south at local solar noon in the northern mid-latitudes") {
  // Greenwich, 2025-04-15: equation of time is about zero, solar noon close to 12:00 UTC.
  const auto s = sun_at(51.4779, 0.0, "2025-04-15T12:00:00Z");
  CHECK(std::abs(testing::deg(s.azimuth) - 180.0) < 1.0);
  CHECK(s.above_horizon());
}

TEST_CASE("polar night and midnight sun") {
  const auto night = sun_at(78.2232, 15.6267, "2025-12-21T11:00:00Z");
  CHECK_FALSE(night.above_horizon());
  CHECK(night.zenith > kPi / 2);
  const auto midnight_sun = sun_at(78.2232, 15.6267, "2025-06-21T23:00:00Z");
  CHECK(midnight_sun.above_horizon());
}

TEST_CASE("sun position is continuous across a day") {
  Direction prev = sun_at(40, -74, "2025-06-30T00:00:00Z").direction();
  for (int minute = 1; minute < 24 * 60; ++minute) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "2025-06-30T%02d:%02d:00Z", minute / 60, minute % 60);
    const auto d = sun_at(40, -74, buf).direction();
    // The sun moves 0.25 degrees per minute at most.
    CHECK(testing::deg(d.angle_to(prev)) < 0.26);
    prev = d;
  }
}

TEST_CASE("solar declination follows the seasons") {
  const auto june = solar_geometry(parse_instant("2025-06-21T12:00:00Z"));
  const auto dec = solar_geometry(parse_instant("2025-12-21T12:00:00Z"));
  const auto mar = solar_geometry(parse_instant("2025-03-20T09:00:00Z"));
  CHECK(testing::deg(june.declination) == doctest::Approx(23.44).epsilon(0.002));
  CHECK(testing::deg(dec.declination) == doctest::Approx(-23.44).epsilon(0.002));
  CHECK(std::abs(testing::deg(mar.declination)) < 0.05);
  // Equation of time: near +16 minutes in early November.
  CHECK(solar_geometry(parse_instant("2025-11-03T12:00:00Z")).equation_of_time_min ==
        doctest::Approx(16.4).epsilon(0.02));
}

TEST_CASE("out-of-range inputs are range errors") {
  CHECK_ERROR_KIND(sun_at(90.5, 0, "2025-01-01T00:00:00Z"), ErrorKind::range);
  CHECK_ERROR_KIND(sun_at(0, -180.01, "2025-01-01T00:00:00Z"), ErrorKind::range);
  CHECK_ERROR_KIND(sun_at(0, 0, "1949-12-31T23:59:59Z"), ErrorKind::range);
  CHECK_ERROR_KIND(sun_at(0, 0, "2101-01-01T00:00:00Z"), ErrorKind::range);
  CHECK_ERROR_KIND(sun_at(std::nan(""), 0, "2025-01-01T00:00:00Z"), ErrorKind::range);
  CHECK_NOTHROW(sun_at(-90, 180, "2100-12-31T23:59:59Z"));
  CHECK_NOTHROW(sun_at(90, -180, "1950-01-01T00:00:00Z"));
}
