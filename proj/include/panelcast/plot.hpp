#pragma once

#include <string>
#include <vector>

#include "panelcast/irradiance.hpp"

namespace panelcast {

struct PlotSeries {
  std::string label;
  std::vector<Instant> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string y_label = "W/m^2";
  int width = 800;
  int height = 400;
};

/// Forecast column by CSV header name (`e_sun_wm2`, ..., `e_total_wm2`).
PlotSeries forecast_column(const std::vector<ForecastPoint>& points, const std::string& column,
                           const std::string& label);

/// Standalone SVG line chart. The first series is drawn black, the second
/// red, later ones in a fixed palette. The time axis is labeled in UTC
/// hours relative to the earliest point. domain_error without data.
std::string svg_line_chart(const std::vector<PlotSeries>& series, const ChartOptions& options);

}  // namespace panelcast
