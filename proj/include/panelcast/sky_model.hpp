#pragma once

#include <array>

#include "panelcast/ephemeris.hpp"
#include "panelcast/geom.hpp"

namespace panelcast {

/// Kasten (1966) relative optical air mass for a zenith angle in radians.
double relative_air_mass(double zenith);

/// Extraterrestrial normal irradiance (W/m^2): 1367 W/m^2 with Spencer's
/// eccentricity correction for a 1-based day of year.
double extraterrestrial_normal(int day_of_year);

/// Upper edges of the eight sky-clearness bins; the last bin is open.
inline constexpr std::array<double, 7> kClearnessBinEdges = {1.065, 1.230, 1.500, 1.950,
                                                             2.800, 4.500, 6.200};

/// 0-based clearness bin. A value exactly on an edge belongs to the lower bin.
int clearness_bin(double epsilon);

struct SkyConditionIndices {
  double clearness;   // epsilon >= 1
  double brightness;  // delta >= 0
  double sun_zenith;  // radians
};

/// epsilon = ((dhi + dni) / dhi + k z^3) / (1 + k z^3), k = 1.041 (z in
/// radians); delta = m * dhi / E_ext. Throws domain_error for dhi <= 0,
/// dni < 0 or a sun at/below the horizon.
SkyConditionIndices condition_indices(double dni, double dhi, const SolarPosition& sun,
                                      int day_of_year);

struct PerezCoefficients {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
};

/// All-weather sky coefficients from the published 8-bin table. Each
/// coefficient is x1 + x2 z + delta (x3 + x4 z), except c and d in the
/// overcast bin. `b` is capped at 0 so the gradation term stays bounded at
/// the horizon.
PerezCoefficients perez_coefficients(const SkyConditionIndices& indices);

/// The same coefficients before the b <= 0 cap.
PerezCoefficients perez_coefficients_raw(const SkyConditionIndices& indices);

/// Row `bin` of the coefficient table: [a1..a4, b1..b4, c1..c4, d1..d4, e1..e4].
const std::array<double, 20>& perez_table_row(int bin);

/// Relative radiance (1 + a exp(b / cos z)) (1 + c exp(d g) + e cos^2 g),
/// g the angle to the sun; clamped at 0, and 0 at or below the horizon.
double relative_radiance(const PerezCoefficients& coeffs, const Vec3& dir, const Vec3& sun_dir);
double relative_radiance(const PerezCoefficients& coeffs, const Direction& dir,
                         const SolarPosition& sun);

/// Absolute sky radiance L = k * relative radiance, with k chosen so the
/// cosine-weighted upper-hemisphere integral equals DHI on the given grid.
class SkyRadianceModel {
 public:
  SkyRadianceModel(PerezCoefficients coeffs, SolarPosition sun, double dni, double dhi,
                   double grid_step_deg = 1.0);

  /// Uniform sky of the given DHI (L = dhi / pi analytically, normalized on
  /// the grid like any other model).
  static SkyRadianceModel isotropic(SolarPosition sun, double dni, double dhi,
                                    double grid_step_deg = 1.0);

  /// Same sky with the sun moved to `azimuth` at unchanged zenith; the
  /// normalization is azimuth-invariant and carried over.
  SkyRadianceModel with_sun_azimuth(double azimuth) const;

  /// W / (m^2 sr) toward Earth-frame direction `dir` (unit).
  double radiance(const Vec3& dir) const {
    return normalization_ * relative_radiance(coeffs_, dir, sun_dir_);
  }

  const PerezCoefficients& coefficients() const { return coeffs_; }
  const SolarPosition& sun() const { return sun_; }
  const Vec3& sun_direction() const { return sun_dir_; }
  double dni() const { return dni_; }
  double dhi() const { return dhi_; }
  double normalization() const { return normalization_; }
  double grid_step_deg() const { return grid_step_deg_; }

 private:
  PerezCoefficients coeffs_;
  SolarPosition sun_;
  Vec3 sun_dir_;
  double dni_;
  double dhi_;
  double grid_step_deg_;
  double normalization_ = 0.0;
};

/// condition_indices -> perez_coefficients -> normalized model. Falls back
/// to the uniform sky when the clamped distribution is zero everywhere.
SkyRadianceModel build_sky(double dni, double dhi, const SolarPosition& sun, int day_of_year,
                           double grid_step_deg = 1.0);

}  // namespace panelcast
