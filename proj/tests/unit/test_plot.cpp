#include <regex>

#include "doctest.h"
#include "panelcast/plot.hpp"
#include "test_support.hpp"

using namespace panelcast;

namespace {

std::vector<ForecastPoint> day() {
  std::vector<ForecastPoint> pts;
  const auto t0 = parse_instant("2025-06-01T04:00:00Z");
  for (int i = 0; i <= 16; ++i) {
    const double s = std::max(0.0, std::sin(kPi * i / 16.0));
    pts.push_back(ForecastPoint::make(t0 + std::chrono::hours(i), 700 * s, 120 * s, 30 * s));
  }
  return pts;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("forecast columns") {
  const auto pts = day();
  const auto total = forecast_column(pts, "e_total_wm2", "total");
  CHECK(total.label == "total");
  REQUIRE(total.y.size() == pts.size());
  CHECK(total.y[8] == doctest::Approx(850.0));
  CHECK(forecast_column(pts, "e_sun_wm2", "s").y[8] == doctest::Approx(700.0));
  CHECK(forecast_column(pts, "e_sky_wm2", "s").y[8] == doctest::Approx(120.0));
  CHECK(forecast_column(pts, "e_scene_wm2", "s").y[8] == doctest::Approx(30.0));
  CHECK(total.x[3] == pts[3].instant);
  CHECK_ERROR_KIND(forecast_column(pts, "timestamp", "x"), ErrorKind::config);
}

TEST_CASE("SVG chart has one black and one red line and a legend") {
  const auto pts = day();
  auto baseline = pts;
  for (auto& p : baseline) p.e_total *= 0.8;
  ChartOptions opt;
  opt.title = "Forecast & baseline <test>";
  const auto svg = svg_line_chart({forecast_column(pts, "e_total_wm2", "pipeline"),
                                   forecast_column(baseline, "e_total_wm2", "baseline")},
                                  opt);
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\"", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<path ") == 2);
  CHECK(svg.find("<path d=\"M") != std::string::npos);
  CHECK(svg.find("stroke=\"#000000\" stroke-width=\"1.5\"") != std::string::npos);
  CHECK(svg.find("stroke=\"#d62728\" stroke-width=\"1.5\"") != std::string::npos);
  CHECK(svg.find(">pipeline</text>") != std::string::npos);
  CHECK(svg.find(">baseline</text>") != std::string::npos);
  CHECK(svg.find("Forecast &amp; baseline &lt;test&gt;") != std::string::npos);
  CHECK(svg.find("hours since 2025-06-01T04:00:00Z") != std::string::npos);
  CHECK(svg.find("W/m^2") != std::string::npos);
  // Each path has one vertex per point.
  const auto first = svg.find("<path d=\"");
  const auto end = svg.find('"', first + 9);
  CHECK(count(svg.substr(first, end - first), " L") == pts.size() - 1);
}

TEST_CASE("all path coordinates stay inside the chart") {
  ChartOptions opt;
  opt.width = 300;
  opt.height = 200;
  const auto svg = svg_line_chart({forecast_column(day(), "e_sun_wm2", "sun")}, opt);
  const std::regex coord(R"(([ML])(-?[0-9.]+) (-?[0-9.]+))");
  int n = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), coord); it != std::sregex_iterator(); ++it) {
    const double x = std::stod((*it)[2]), y = std::stod((*it)[3]);
    CHECK(x >= 0.0);
    CHECK(x <= 300.0);
    CHECK(y >= 0.0);
    CHECK(y <= 200.0);
    ++n;
  }
  CHECK(n == 17);
}

TEST_CASE("non-finite values break the line") {
  PlotSeries s{"gappy", {}, {}};
  const auto t0 = parse_instant("2025-01-01T00:00:00Z");
  for (int i = 0; i < 5; ++i) {
    s.x.push_back(t0 + std::chrono::minutes(10 * i));
    s.y.push_back(i == 2 ? std::nan("") : 10.0 * i);
  }
  const auto svg = svg_line_chart({s}, {});
  const auto first = svg.find("<path d=\"");
  const auto path = svg.substr(first, svg.find('"', first + 9) - first);
  CHECK(count(path, "M") == 2);
}

TEST_CASE("chart errors") {
  CHECK_ERROR_KIND(svg_line_chart({}, {}), ErrorKind::domain);
  CHECK_ERROR_KIND(svg_line_chart({PlotSeries{"e", {}, {}}}, {}), ErrorKind::domain);
  PlotSeries ragged{"r", {parse_instant("2025-01-01T00:00:00Z")}, {1.0, 2.0}};
  CHECK_ERROR_KIND(svg_line_chart({ragged}, {}), ErrorKind::domain);
  ChartOptions tiny;
  tiny.width = 50;
  CHECK_ERROR_KIND(svg_line_chart({forecast_column(day(), "e_sun_wm2", "s")}, tiny), ErrorKind::config);
  // A single point or a flat series still renders.
  PlotSeries one{"one", {parse_instant("2025-01-01T00:00:00Z")}, {0.0}};
  CHECK(svg_line_chart({one}, {}).find("</svg>") != std::string::npos);
}
