#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panelcast/ephemeris.hpp"
#include "panelcast/time.hpp"

namespace panelcast {

struct WeatherRecord {
  Instant instant{};
  double ghi = 0.0;  // W/m^2
  double dhi = 0.0;
  double dni = 0.0;
  std::optional<double> ghi_clear;
};

struct WeatherSeries {
  std::vector<WeatherRecord> records;
  /// Median spacing of consecutive records, seconds (0 for < 2 records).
  std::int64_t nominal_step = 0;
  /// Non-fatal consistency findings (ghi > dhi + dni + 50, ...).
  std::vector<std::string> warnings;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }

  /// Throws format_error unless timestamps strictly increase.
  void check_monotone() const;
  /// Recomputes nominal_step from the timestamps.
  void update_step();
};

/// CSV with header `timestamp,ghi_wm2,dhi_wm2,dni_wm2[,ghi_clear_wm2]`,
/// ISO-8601 UTC timestamps. Malformed rows raise parse_error with the line
/// number; non-increasing timestamps raise format_error.
WeatherSeries parse_weather(const std::string& text, const std::string& source_name = "weather");
WeatherSeries load_weather(const std::filesystem::path& path);

/// 6 significant digits; the ghi_clear column is written when any record
/// carries it.
std::string format_weather(const WeatherSeries& series);
void save_weather(const std::filesystem::path& path, const WeatherSeries& series);

/// Fixed-turbidity clear-sky template shared by the synthetic year and the
/// analytic scene predictor:
///   DNI = E_ext * 0.7^(m^0.678)   (m: Kasten air mass)
///   DHI = 0.1 * DNI
///   GHI = DNI cos z + DHI
/// and all zero with the sun at or below the horizon.
struct ClearSkyIrradiance {
  double ghi = 0.0;
  double dhi = 0.0;
  double dni = 0.0;
};
ClearSkyIrradiance clear_sky_template(double sun_zenith, int day_of_year);

/// Deterministic clear-sky year (2025 unless `year` is given) at `step`
/// seconds, with ghi_clear = ghi.
WeatherSeries synth_clear_year(double latitude_deg, double longitude_deg,
                               std::int64_t step_seconds = 3600, int year = 2025);

/// Same template over an arbitrary [start, end) span.
WeatherSeries synth_clear_span(double latitude_deg, double longitude_deg, Instant start,
                               Instant end, std::int64_t step_seconds);

}  // namespace panelcast
