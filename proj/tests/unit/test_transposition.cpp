#include <random>
#include <sstream>

#include "doctest.h"
#include "panelcast/fileio.hpp"
#include "panelcast/transposition.hpp"
#include "test_support.hpp"

using namespace panelcast;

TEST_CASE("tilted diffuse matches the reference value") {
  const auto panel = PanelPose::from_tilt_azimuth(deg2rad(40), deg2rad(180));
  const SolarPosition sun{deg2rad(52), deg2rad(120)};
  CHECK(perez_transposition_diffuse(750, 110, sun, panel, 172) ==
        doctest::Approx(130.27979412623915).epsilon(1e-10));
}

TEST_CASE("a horizontal plane receives DHI while the sun is within 85 degrees of the zenith") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dhi(1, 500), ratio(0, 10), zen(0, 85), az(0, 360);
  const PanelPose flat(Direction(0, 0, 1));
  for (int i = 0; i < 1000; ++i) {
    const double h = dhi(rng);
    const SolarPosition sun{deg2rad(zen(rng)), deg2rad(az(rng))};
    CHECK(perez_transposition_diffuse(h * ratio(rng), h, sun, flat, 1 + i % 365) ==
          doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("near the horizon only the isotropic term remains") {
  const auto panel = PanelPose::from_tilt_azimuth(deg2rad(60), deg2rad(90));
  const SolarPosition sun{deg2rad(88), deg2rad(90)};
  CHECK(perez_transposition_diffuse(50, 40, sun, panel, 10) ==
        doctest::Approx(40 * (1 + std::cos(deg2rad(60))) / 2));
  CHECK(perez_transposition_diffuse(50, 0, sun, panel, 10) == 0.0);
  CHECK(perez_transposition_diffuse(50, -3, SolarPosition{0.3, 0}, panel, 10) == 0.0);
}

TEST_CASE("circumsolar brightening favors a plane facing the sun") {
  const SolarPosition sun{deg2rad(45), deg2rad(180)};
  const double toward = perez_transposition_diffuse(
      800, 100, sun, PanelPose::from_tilt_azimuth(deg2rad(45), deg2rad(180)), 150);
  const double away = perez_transposition_diffuse(
      800, 100, sun, PanelPose::from_tilt_azimuth(deg2rad(45), 0.0), 150);
  CHECK(toward > away);
  CHECK(away > 0.0);
}

TEST_CASE("ground reflection identities") {
  const SolarPosition sun{deg2rad(60), 0.0};
  CHECK(e_ground(800, 100, sun, 0.0, 0.2) == 0.0);
  CHECK(e_ground(800, 100, sun, kPi / 2, 0.2) == doctest::Approx(0.2 * 500 / 2));
  CHECK(e_ground(800, 100, sun, kPi / 2, 0.0) == 0.0);
  // Sun below the horizon: only the diffuse part reflects.
  CHECK(e_ground(800, 100, SolarPosition{deg2rad(95), 0}, kPi / 2, 1.0) == doctest::Approx(50.0));
  // Monotone in tilt and linear in albedo.
  CHECK(e_ground(800, 100, sun, 1.0, 0.4) == doctest::Approx(2 * e_ground(800, 100, sun, 1.0, 0.2)));
  CHECK(e_ground(800, 100, sun, 1.2, 0.3) > e_ground(800, 100, sun, 0.6, 0.3));
  CHECK_ERROR_KIND(e_ground(800, 100, sun, 1.0, 1.5), ErrorKind::domain);
  CHECK_ERROR_KIND(e_ground(800, 100, sun, 1.0, -0.1), ErrorKind::domain);
}

TEST_CASE("baseline configuration validation") {
  TranspositionConfig c;
  CHECK_NOTHROW(c.validate());
  c.albedo = 2.0;
  CHECK_ERROR_KIND(c.validate(), ErrorKind::domain);
  c.albedo = 0.2;
  c.svf_source = SvfSource::from_value;
  c.svf_value = 1.2;
  CHECK_ERROR_KIND(c.validate(), ErrorKind::domain);
  CHECK_ERROR_KIND(BaselineSky::from_value(-0.1), ErrorKind::domain);
  c.svf_source = SvfSource::from_aperture;
  CHECK_ERROR_KIND(BaselineSky::from_config(c, std::nullopt, Rotation()), ErrorKind::config);
}

TEST_CASE("baseline components") {
  TranspositionConfig cfg;
  cfg.albedo = 0.25;
  cfg.panel = PanelPose::from_tilt_azimuth(deg2rad(30), deg2rad(180));
  const WeatherRecord rec{parse_instant("2025-06-21T17:00:00Z"), 900, 100, 800, std::nullopt};
  const auto sun = solar_position({40, -74, rec.instant});
  const auto half = BaselineSky::from_value(0.5);
  const auto c = baseline_components(rec, sun, half, cfg);
  CHECK(c.beam == doctest::Approx(800 * cfg.panel.normal().dot(sun.direction())));
  CHECK(c.diffuse == doctest::Approx(0.5 * perez_transposition_diffuse(800, 100, sun, cfg.panel, 172)));
  CHECK(c.ground == doctest::Approx(e_ground(800, 100, sun, deg2rad(30), 0.25)));
  CHECK(baseline_total(rec, sun, half, cfg) == doctest::Approx(c.beam + c.diffuse + c.ground));

  // From an aperture: SVF from the mask and the sun occluded when outside it.
  const auto proj = ProjectionModel::fisheye();
  Mask m(128, 128);
  for (int y = 0; y < 128; ++y)
    for (int x = 0; x < 128; ++x) {
      const auto d = proj.unproject({x + 0.5, y + 0.5}, 128, 128);
      m.at(x, y) = d && Direction(*d).zenith() < deg2rad(10) ? 1 : 0;
    }
  const auto narrow = BaselineSky::from_aperture(SkyAperture(m, proj), Rotation(), PanelPose(), 1.0);
  CHECK(narrow.svf() == doctest::Approx(std::pow(std::sin(deg2rad(10)), 2)).epsilon(0.1));
  CHECK(narrow.sun_visibility(sun) == 0.0);
  CHECK(baseline_components(rec, sun, narrow, cfg).beam == 0.0);
  CHECK(baseline_components(rec, SolarPosition{deg2rad(100), 0}, half, cfg).total() == 0.0);
}

TEST_CASE("baseline series maps beam, diffuse and ground onto forecast columns") {
  TranspositionConfig cfg;
  cfg.panel = PanelPose::from_tilt_azimuth(deg2rad(20), deg2rad(200));
  const auto w = synth_clear_span(40, -74, parse_instant("2025-03-20T05:00:00Z"),
                                  parse_instant("2025-03-21T05:00:00Z"), 3600);
  const auto sky = BaselineSky::from_value(0.8);
  const auto pts = baseline_series(40, -74, w, sky, cfg);
  REQUIRE(pts.size() == w.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto sun = solar_position({40, -74, w.records[i].instant});
    const auto c = baseline_components(w.records[i], sun, sky, cfg);
    CHECK(pts[i].e_sun == c.beam);
    CHECK(pts[i].e_sky == c.diffuse);
    CHECK(pts[i].e_scene == c.ground);
    CHECK(pts[i].e_total == doctest::Approx(c.total()));
  }
}

TEST_CASE("transposition coefficient data file matches the embedded table") {
  const auto text = read_file(std::string(PANELCAST_DATA_DIR) + "/perez_transposition_coefficients.csv");
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin,epsilon_low,epsilon_high,f11,f12,f13,f21,f22,f23");
  int rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    REQUIRE(f.size() == 9);
    const auto& row = perez_transposition_row(parse_int(f[0], "bin") - 1);
    for (std::size_t i = 0; i < 6; ++i) CHECK(parse_double(f[3 + i], "f") == row[i]);
    ++rows;
  }
  CHECK(rows == 8);
  CHECK_ERROR_KIND(perez_transposition_row(-1), ErrorKind::range);
}
