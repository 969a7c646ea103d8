#include "panelcast/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "panelcast/error.hpp"

namespace panelcast {

namespace {

const char* const kPalette[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Step of 1, 2 or 5 times a power of ten giving about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::abs(v) < 1e-9 ? 0.0 : v);
  return buf;
}

}  // namespace

PlotSeries forecast_column(const std::vector<ForecastPoint>& points, const std::string& column,
                           const std::string& label) {
  double ForecastPoint::*field = nullptr;
  if (column == "e_sun_wm2") field = &ForecastPoint::e_sun;
  else if (column == "e_sky_wm2") field = &ForecastPoint::e_sky;
  else if (column == "e_scene_wm2") field = &ForecastPoint::e_scene;
  else if (column == "e_total_wm2") field = &ForecastPoint::e_total;
  else fail(ErrorKind::config, "unknown forecast column '" + column + "'");
  PlotSeries s;
  s.label = label;
  for (const auto& p : points) {
    s.x.push_back(p.instant);
    s.y.push_back(p.*field);
  }
  return s;
}

std::string svg_line_chart(const std::vector<PlotSeries>& series, const ChartOptions& options) {
  if (options.width < 100 || options.height < 100) {
    fail(ErrorKind::config, "chart must be at least 100x100 pixels");
  }
  std::int64_t t0 = std::numeric_limits<std::int64_t>::max();
  std::int64_t t1 = std::numeric_limits<std::int64_t>::min();
  double y1 = 0.0;
  std::size_t n = 0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) fail(ErrorKind::domain, "series '" + s.label + "' is ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      t0 = std::min(t0, seconds_since_epoch(s.x[i]));
      t1 = std::max(t1, seconds_since_epoch(s.x[i]));
      if (std::isfinite(s.y[i])) y1 = std::max(y1, s.y[i]);
      ++n;
    }
  }
  if (n == 0) fail(ErrorKind::domain, "nothing to plot");
  double y0 = 0.0;
  for (const auto& s : series)
    for (const double v : s.y)
      if (std::isfinite(v)) y0 = std::min(y0, v);
  if (y1 - y0 <= 0.0) y1 = y0 + 1.0;
  const double hours = std::max(static_cast<double>(t1 - t0) / 3600.0, 1.0 / 60.0);
  const double ystep = nice_step(y1 - y0, 5);
  y1 = std::ceil(y1 / ystep) * ystep;

  const double left = 64, right = 16, top = options.title.empty() ? 16 : 36, bottom = 44;
  const double pw = options.width - left - right;
  const double ph = options.height - top - bottom;
  auto px = [&](std::int64_t t) { return left + pw * (static_cast<double>(t - t0) / 3600.0) / hours; };
  auto py = [&](double v) { return top + ph * (1.0 - (v - y0) / (y1 - y0)); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(options.width) + "\" height=\"" +
                    std::to_string(options.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    out += "<text x=\"" + num(options.width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(options.title) + "</text>\n";
  }
  // Grid and ticks.
  for (double v = y0; v <= y1 + 1e-9 * ystep; v += ystep) {
    out += "<line x1=\"" + num(left) + "\" x2=\"" + num(left + pw) + "\" y1=\"" + num(py(v)) +
           "\" y2=\"" + num(py(v)) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(v) + 4) + "\" text-anchor=\"end\">" +
           tick_label(v) + "</text>\n";
  }
  const double xstep = nice_step(hours, 8);
  for (double h = 0.0; h <= hours + 1e-9; h += xstep) {
    const double x = left + pw * h / hours;
    out += "<line x1=\"" + num(x) + "\" x2=\"" + num(x) + "\" y1=\"" + num(top) + "\" y2=\"" +
           num(top + ph) + "\" stroke=\"#eeeeee\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(top + ph + 16) + "\" text-anchor=\"middle\">" +
           tick_label(h) + "</text>\n";
  }
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(options.height - 8.0) +
         "\" text-anchor=\"middle\">hours since " + escape(format_instant(instant_from_seconds(t0))) +
         "</text>\n";
  out += "<text transform=\"translate(14," + num(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(options.y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string d;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      d += pen_down ? " L" : (d.empty() ? "M" : " M");
      d += num(px(seconds_since_epoch(s.x[i]))) + " " + num(py(s.y[i]));
      pen_down = true;
    }
    if (!d.empty()) {
      out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = top + 14.0 + 14.0 * static_cast<double>(k);
    out += "<line x1=\"" + num(left + 8) + "\" x2=\"" + num(left + 28) + "\" y1=\"" + num(ly - 4) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(left + 32) + "\" y=\"" + num(ly) + "\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace panelcast
