#include "panelcast/sky_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "panelcast/error.hpp"

namespace panelcast {

double relative_air_mass(double zenith) {
  const double zdeg = std::min(rad2deg(zenith), 90.0);
  return 1.0 / (std::cos(deg2rad(zdeg)) + 0.15 * std::pow(93.885 - zdeg, -1.253));
}

double extraterrestrial_normal(int day_of_year) {
  const double b = kTwoPi * (day_of_year - 1) / 365.0;
  return 1367.0 * (1.00011 + 0.034221 * std::cos(b) + 0.00128 * std::sin(b) +
                   0.000719 * std::cos(2.0 * b) + 0.000077 * std::sin(2.0 * b));
}

int clearness_bin(double epsilon) {
  for (std::size_t i = 0; i < kClearnessBinEdges.size(); ++i) {
    if (epsilon <= kClearnessBinEdges[i]) return static_cast<int>(i);
  }
  return static_cast<int>(kClearnessBinEdges.size());
}

SkyConditionIndices condition_indices(double dni, double dhi, const SolarPosition& sun,
                                      int day_of_year) {
  if (!(dhi > 0.0)) fail(ErrorKind::domain, "sky normalization needs DHI > 0");
  if (!(dni >= 0.0)) fail(ErrorKind::domain, "DNI must be non-negative");
  if (!sun.above_horizon()) fail(ErrorKind::domain, "sky model needs the sun above the horizon");
  const double z = sun.zenith;
  const double kz3 = 1.041 * z * z * z;
  const double eps = dni == 0.0 ? 1.0 : (((dhi + dni) / dhi) + kz3) / (1.0 + kz3);
  const double delta = relative_air_mass(z) * dhi / extraterrestrial_normal(day_of_year);
  return {eps, delta, z};
}

namespace {

// Perez, Seals & Michalsky (1993) all-weather model, relative-radiance
// coefficients. Row per clearness bin: a1..a4 b1..b4 c1..c4 d1..d4 e1..e4.
constexpr std::array<std::array<double, 20>, 8> kPerezTable = {{
    {1.3525, -0.2576, -0.2690, -1.4366, -0.7670, 0.0007, 1.2734, -0.1233, 2.8000, 0.6004,
     1.2375, 1.0000, 1.8734, 0.6297, 0.9738, 0.2809, 0.0356, -0.1246, -0.5718, 0.9938},
    {-1.2219, -0.7730, 1.4148, 1.1016, -0.2054, 0.0367, -3.9128, 0.9156, 6.9750, 0.1774,
     6.4477, -0.1239, -1.5798, -0.5081, -1.7812, 0.1080, 0.2624, 0.0672, -0.2190, -0.4285},
    {-1.1000, -0.2515, 0.8952, 0.0156, 0.2782, -0.1812, -4.5000, 1.1766, 24.7219, -13.0812,
     -37.7000, 34.8438, -5.0000, 1.5218, 3.9229, -2.6204, -0.0156, 0.1597, 0.4199, -0.5562},
    {-0.5484, -0.6654, -0.2672, 0.7117, 0.7234, -0.6219, -5.6812, 2.6297, 33.3389, -18.3000,
     -62.2500, 52.0781, -3.5000, 0.0016, 1.1477, 0.1062, 0.4659, -0.3296, -0.0876, -0.0329},
    {-0.6000, -0.3566, -2.5000, 2.3250, 0.2937, 0.0496, -5.6812, 1.8415, 21.0000, -4.7656,
     -21.5906, 7.2492, -3.5000, -0.1554, 1.4062, 0.3988, 0.0032, 0.0766, -0.0656, -0.1294},
    {-1.0156, -0.3670, 1.0078, 1.4051, 0.2875, -0.5328, -3.8500, 3.3750, 14.0000, -0.9999,
     -7.1406, 7.5469, -3.4000, -0.1078, -1.0750, 1.5702, -0.0672, 0.4016, 0.3017, -0.4844},
    {-1.0000, 0.0211, 0.5025, -0.5119, -0.3000, 0.1922, 0.7023, -1.6317, 19.0000, -5.0000,
     1.2438, -1.9094, -4.0000, 0.0250, 0.3844, 0.2656, 1.0468, -0.3788, -2.4517, 1.4656},
    {-1.0500, 0.0289, 0.4260, 0.3590, -0.3250, 0.1156, 0.7781, 0.0025, 31.0625, -14.5000,
     -46.1148, 55.3750, -7.2312, 0.4050, 13.3500, 0.6234, 1.5000, -0.6426, 1.8564, 0.5636},
}};

}  // namespace

const std::array<double, 20>& perez_table_row(int bin) {
  if (bin < 0 || bin >= static_cast<int>(kPerezTable.size())) {
    fail(ErrorKind::range, "clearness bin " + std::to_string(bin) + " out of range");
  }
  return kPerezTable[static_cast<std::size_t>(bin)];
}

PerezCoefficients perez_coefficients_raw(const SkyConditionIndices& indices) {
  if (!(indices.clearness >= 1.0) || !(indices.brightness >= 0.0)) {
    fail(ErrorKind::domain, "sky indices need clearness >= 1 and brightness >= 0");
  }
  const int bin = clearness_bin(indices.clearness);
  const auto& row = perez_table_row(bin);
  const double z = indices.sun_zenith;
  const double dl = indices.brightness;
  auto linear = [&](int k) {
    const double* x = &row[static_cast<std::size_t>(4 * k)];
    return x[0] + x[1] * z + dl * (x[2] + x[3] * z);
  };
  PerezCoefficients c{linear(0), linear(1), linear(2), linear(3), linear(4)};
  if (bin == 0) {
    c.c = std::exp(std::pow(dl * (row[8] + row[9] * z), row[10])) - row[11];
    c.d = -std::exp(dl * (row[12] + row[13] * z)) + row[14] + dl * row[15];
  }
  return c;
}

PerezCoefficients perez_coefficients(const SkyConditionIndices& indices) {
  PerezCoefficients c = perez_coefficients_raw(indices);
  c.b = std::min(c.b, 0.0);
  return c;
}

double relative_radiance(const PerezCoefficients& k, const Vec3& dir, const Vec3& sun_dir) {
  const double cz = dir.z();
  if (cz <= 0.0) return 0.0;
  const double cg = std::clamp(dir.dot(sun_dir), -1.0, 1.0);
  const double gamma = std::acos(cg);
  const double gradation = 1.0 + k.a * std::exp(k.b / cz);
  const double indicatrix = 1.0 + k.c * std::exp(k.d * gamma) + k.e * cg * cg;
  return std::max(0.0, gradation * indicatrix);
}

double relative_radiance(const PerezCoefficients& coeffs, const Direction& dir,
                         const SolarPosition& sun) {
  return relative_radiance(coeffs, dir.vec(), sun.direction().vec());
}

SkyRadianceModel::SkyRadianceModel(PerezCoefficients coeffs, SolarPosition sun, double dni,
                                   double dhi, double grid_step_deg)
    : coeffs_(coeffs),
      sun_(sun),
      sun_dir_(sun.direction().vec()),
      dni_(dni),
      dhi_(dhi),
      grid_step_deg_(grid_step_deg) {
  if (!(dhi > 0.0)) fail(ErrorKind::domain, "sky normalization needs DHI > 0");
  const HemisphereGrid grid(grid_step_deg);
  double integral = 0.0;
  for (const auto& cell : grid.cells()) {
    integral += relative_radiance(coeffs_, cell.dir, sun_dir_) * cell.cos_zenith * cell.solid_angle;
  }
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    fail(ErrorKind::domain, "relative sky radiance integrates to zero; cannot normalize to DHI");
  }
  normalization_ = dhi / integral;
}

SkyRadianceModel SkyRadianceModel::isotropic(SolarPosition sun, double dni, double dhi,
                                             double grid_step_deg) {
  return SkyRadianceModel(PerezCoefficients{}, sun, dni, dhi, grid_step_deg);
}

SkyRadianceModel SkyRadianceModel::with_sun_azimuth(double azimuth) const {
  SkyRadianceModel copy = *this;
  copy.sun_.azimuth = wrap_two_pi(azimuth);
  copy.sun_dir_ = copy.sun_.direction().vec();
  return copy;
}

SkyRadianceModel build_sky(double dni, double dhi, const SolarPosition& sun, int day_of_year,
                           double grid_step_deg) {
  const auto indices = condition_indices(dni, dhi, sun, day_of_year);
  const auto coeffs = perez_coefficients(indices);
  // Far outside the fitted brightness range the clamped distribution can
  // vanish everywhere; the uniform sky is the only shape left.
  const HemisphereGrid grid(grid_step_deg);
  const Vec3 s = sun.direction().vec();
  for (const auto& cell : grid.cells()) {
    if (relative_radiance(coeffs, cell.dir, s) > 0.0) {
      return SkyRadianceModel(coeffs, sun, dni, dhi, grid_step_deg);
    }
  }
  return SkyRadianceModel::isotropic(sun, dni, dhi, grid_step_deg);
}

}  // namespace panelcast
