#include "panelcast/weather.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"
#include "panelcast/sky_model.hpp"

namespace panelcast {

namespace {

const char* const kBaseHeader = "timestamp,ghi_wm2,dhi_wm2,dni_wm2";
const char* const kClearHeader = "timestamp,ghi_wm2,dhi_wm2,dni_wm2,ghi_clear_wm2";

}  // namespace

void WeatherSeries::check_monotone() const {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].instant <= records[i - 1].instant) {
      fail(ErrorKind::format, "weather timestamps must strictly increase (record " +
                                  std::to_string(i + 1) + " at " +
                                  format_instant(records[i].instant) + ")");
    }
  }
}

void WeatherSeries::update_step() {
  if (records.size() < 2) {
    nominal_step = 0;
    return;
  }
  std::vector<std::int64_t> diffs;
  diffs.reserve(records.size() - 1);
  for (std::size_t i = 1; i < records.size(); ++i) {
    diffs.push_back((records[i].instant - records[i - 1].instant).count());
  }
  const auto mid = diffs.begin() + static_cast<std::ptrdiff_t>(diffs.size() / 2);
  std::nth_element(diffs.begin(), mid, diffs.end());
  nominal_step = *mid;
}

WeatherSeries parse_weather(const std::string& text, const std::string& source_name) {
  WeatherSeries series;
  const auto lines = split(text, '\n');
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) fail(ErrorKind::parse, source_name + ": missing header line");
  std::string header = trim(lines[first]);
  if (!header.empty() && static_cast<unsigned char>(header[0]) == 0xEF) header = header.substr(3);
  bool has_clear = false;
  if (header == kClearHeader) {
    has_clear = true;
  } else if (header != kBaseHeader) {
    fail(ErrorKind::parse, source_name + ":" + std::to_string(first + 1) +
                               ": expected header '" + kBaseHeader + "[,ghi_clear_wm2]'");
  }
  const std::size_t ncols = has_clear ? 5 : 4;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(i + 1);
    const auto fields = split(line, ',');
    if (fields.size() != ncols) {
      fail(ErrorKind::parse, where + ": expected " + std::to_string(ncols) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    WeatherRecord r;
    try {
      r.instant = parse_instant(fields[0]);
      r.ghi = parse_double(fields[1], "ghi_wm2");
      r.dhi = parse_double(fields[2], "dhi_wm2");
      r.dni = parse_double(fields[3], "dni_wm2");
      if (has_clear && !trim(fields[4]).empty()) r.ghi_clear = parse_double(fields[4], "ghi_clear_wm2");
    } catch (const Error& e) {
      fail(ErrorKind::parse, where + ": " + e.what());
    }
    const auto check = [&](double v, const char* name) {
      if (v < 0.0) fail(ErrorKind::parse, where + ": " + name + " is negative (" + format_g6(v) + ")");
    };
    check(r.ghi, "ghi_wm2");
    check(r.dhi, "dhi_wm2");
    check(r.dni, "dni_wm2");
    if (r.ghi_clear) check(*r.ghi_clear, "ghi_clear_wm2");
    if (r.ghi > r.dhi + r.dni + 50.0) {
      series.warnings.push_back(where + ": ghi exceeds dhi + dni + 50 W/m^2");
    }
    series.records.push_back(r);
  }
  series.check_monotone();
  series.update_step();
  return series;
}

WeatherSeries load_weather(const std::filesystem::path& path) {
  return parse_weather(read_file(path), path.string());
}

std::string format_weather(const WeatherSeries& series) {
  const bool has_clear = std::any_of(series.records.begin(), series.records.end(),
                                     [](const WeatherRecord& r) { return r.ghi_clear.has_value(); });
  std::string out = has_clear ? kClearHeader : kBaseHeader;
  out += '\n';
  for (const auto& r : series.records) {
    out += format_instant(r.instant);
    out += ',' + format_g6(r.ghi) + ',' + format_g6(r.dhi) + ',' + format_g6(r.dni);
    if (has_clear) out += ',' + (r.ghi_clear ? format_g6(*r.ghi_clear) : std::string());
    out += '\n';
  }
  return out;
}

void save_weather(const std::filesystem::path& path, const WeatherSeries& series) {
  write_file_atomic(path, format_weather(series));
}

ClearSkyIrradiance clear_sky_template(double sun_zenith, int day_of_year) {
  if (!(sun_zenith < kPi / 2.0)) return {};
  const double m = relative_air_mass(sun_zenith);
  const double dni = extraterrestrial_normal(day_of_year) * std::pow(0.7, std::pow(m, 0.678));
  const double dhi = 0.1 * dni;
  return {dni * std::cos(sun_zenith) + dhi, dhi, dni};
}

WeatherSeries synth_clear_span(double latitude_deg, double longitude_deg, Instant start,
                               Instant end, std::int64_t step_seconds) {
  if (step_seconds <= 0) fail(ErrorKind::config, "weather step must be positive");
  WeatherSeries series;
  for (Instant t = start; t < end; t += std::chrono::seconds(step_seconds)) {
    const GeoTime geo{latitude_deg, longitude_deg, t};
    const auto sun = solar_position(geo);
    const auto cs = clear_sky_template(sun.zenith, day_of_year(t));
    series.records.push_back({t, cs.ghi, cs.dhi, cs.dni, cs.ghi});
  }
  series.update_step();
  return series;
}

WeatherSeries synth_clear_year(double latitude_deg, double longitude_deg,
                               std::int64_t step_seconds, int year) {
  using namespace std::chrono;
  const Instant start = sys_days(year_month_day{std::chrono::year{year}, January, day{1}});
  const Instant end = sys_days(year_month_day{std::chrono::year{year + 1}, January, day{1}});
  return synth_clear_span(latitude_deg, longitude_deg, start, end, step_seconds);
}

}  // namespace panelcast
