#pragma once

#include "panelcast/geom.hpp"
#include "panelcast/time.hpp"

namespace panelcast {

/// Capture or forecast location and time.
struct GeoTime {
  double latitude_deg = 0.0;   // [-90, 90]
  double longitude_deg = 0.0;  // [-180, 180], East positive
  Instant instant{};

  /// Throws range_error for coordinates out of bounds or an instant outside
  /// 1950-2100.
  void validate() const;
};

/// Sun position in the Earth frame.
struct SolarPosition {
  double zenith = 0.0;   // radians, [0, pi]
  double azimuth = 0.0;  // radians, clockwise from North, [0, 2pi)

  Direction direction() const { return Direction::from_angles(zenith, azimuth); }
  bool above_horizon() const { return zenith < kPi / 2.0; }

  static SolarPosition from_direction(const Direction& d) { return {d.zenith(), d.azimuth()}; }
};

/// Geometric (unrefracted) sun position from the NOAA/Meeus low-order
/// series. Agrees with the NREL SPA to about 0.01 degrees over 1950-2100.
SolarPosition solar_position(const GeoTime& geo_time);

/// Solar declination and equation of time (minutes) for an instant; exposed
/// for the clear-sky template.
struct SolarGeometry {
  double declination;
  double equation_of_time_min;
};
SolarGeometry solar_geometry(Instant t);

}  // namespace panelcast
