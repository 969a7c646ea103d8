#include <filesystem>

#include "doctest.h"
#include "panelcast/canyon.hpp"
#include "test_support.hpp"

using namespace panelcast;

namespace {

// Infinitely long (in x) street of width w between walls of height h.
CanyonScene street(double w, double h) {
  CanyonScene s;
  s.ground_albedo = 0.2;
  s.boxes.push_back({Vec3(-1000, -w / 2 - 5, 0), Vec3(1000, -w / 2, h), 0.3});
  s.boxes.push_back({Vec3(-1000, w / 2, 0), Vec3(1000, w / 2 + 5, h), 0.3});
  return s;
}

PanelPlacement flat_at(const Vec3& p) { return {p, Direction(0, 0, 1), 0.01}; }

bool within(double value, double expected, double stderr_, double rel) {
  return std::abs(value - expected) <= 4.0 * stderr_ + rel * std::abs(expected);
}

}  // namespace

TEST_CASE("ray intersection with boxes and ground") {
  CanyonScene s;
  s.boxes.push_back({Vec3(1, -1, 0), Vec3(2, 1, 3), 0.5});
  const auto hit = intersect(s, Vec3(0, 0, 1), Vec3(1, 0, 0));
  REQUIRE(hit.has_value());
  CHECK(hit->t == doctest::Approx(1.0));
  CHECK(hit->normal == Vec3(-1, 0, 0));
  CHECK(hit->albedo == 0.5);
  const auto ground = intersect(s, Vec3(0, 0, 1), Direction(-1, 0, -1).vec());
  REQUIRE(ground.has_value());
  CHECK(ground->point.z() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ground->normal == Vec3(0, 0, 1));
  CHECK(ground->albedo == 0.2);
  CHECK_FALSE(intersect(s, Vec3(0, 0, 1), Vec3(0, 0, 1)).has_value());
  CHECK(unoccluded(s, Vec3(0, 0, 1), Direction(-1, 0, 1).vec()));
  CHECK_FALSE(unoccluded(s, Vec3(0, 0, 1), Direction(1, 0, 0.5).vec()));
  s.has_ground = false;
  CHECK_FALSE(intersect(s, Vec3(0, 0, 1), Direction(-1, 0, -1).vec()).has_value());
}

TEST_CASE("scene validation and placement checks") {
  CanyonScene s;
  s.ground_albedo = 1.5;
  CHECK_ERROR_KIND(s.validate(), ErrorKind::config);
  s.ground_albedo = 0.2;
  s.boxes.push_back({Vec3(0, 0, 0), Vec3(0, 1, 1), 0.3});
  CHECK_ERROR_KIND(s.validate(), ErrorKind::config);
  s.boxes[0].max = Vec3(1, 1, 1);
  s.boxes[0].albedo = -0.1;
  CHECK_ERROR_KIND(s.validate(), ErrorKind::config);
  s.boxes[0].albedo = 0.3;
  CHECK_NOTHROW(s.validate());
  CHECK_ERROR_KIND(check_placement(s, flat_at(Vec3(0.5, 0.5, 0.5))), ErrorKind::geometry);
  CHECK_ERROR_KIND(check_placement(s, flat_at(Vec3(3, 3, -0.5))), ErrorKind::geometry);
  PanelPlacement zero = flat_at(Vec3(3, 3, 0.01));
  zero.offset = 0.0;
  CHECK_ERROR_KIND(check_placement(s, zero), ErrorKind::geometry);
  CHECK_NOTHROW(check_placement(s, flat_at(Vec3(3, 3, 0.01))));
  CHECK(s.scaled(2.0).boxes[0].max == Vec3(2, 2, 2));
  CHECK_ERROR_KIND(s.scaled(0.0), ErrorKind::domain);
}

TEST_CASE("scene file round trip") {
  const auto rc = random_canyon(4);
  const auto text = format_scene(rc.scene, rc.placement);
  const auto back = parse_scene(text);
  REQUIRE(back.placement.has_value());
  REQUIRE(back.scene.boxes.size() == rc.scene.boxes.size());
  for (std::size_t i = 0; i < rc.scene.boxes.size(); ++i) {
    CHECK(back.scene.boxes[i].min == rc.scene.boxes[i].min);
    CHECK(back.scene.boxes[i].max == rc.scene.boxes[i].max);
    CHECK(back.scene.boxes[i].albedo == rc.scene.boxes[i].albedo);
  }
  CHECK(back.placement->position == rc.placement.position);
  CHECK(back.placement->normal.angle_to(rc.placement.normal) < 1e-12);
  CHECK(format_scene(back.scene, back.placement) == text);

  const auto dir = testing::scratch_dir("scene");
  save_scene(dir / "s.scene", rc.scene, rc.placement);
  CHECK(load_scene(dir / "s.scene").scene.boxes.size() == rc.scene.boxes.size());
  std::filesystem::remove_all(dir);

  const auto parsed = parse_scene("ground = none  # no floor\nbox = 1 1 1 0 0 0 0.4\n");
  CHECK_FALSE(parsed.scene.has_ground);
  CHECK(parsed.scene.boxes[0].min == Vec3(0, 0, 0));
  CHECK_FALSE(parsed.placement.has_value());
  CHECK_ERROR_KIND(parse_scene("box = 1 2 3\n"), ErrorKind::parse);
  CHECK_ERROR_KIND(parse_scene("colour = red\n"), ErrorKind::parse);
  CHECK_ERROR_KIND(parse_scene("just text\n"), ErrorKind::parse);
  CHECK_ERROR_KIND(parse_scene("ground = 2\n"), ErrorKind::config);
}

TEST_CASE("random canyons are deterministic and valid") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto a = random_canyon(seed);
    const auto b = random_canyon(seed);
    CHECK(format_scene(a.scene, a.placement) == format_scene(b.scene, b.placement));
    CHECK_NOTHROW(a.scene.validate());
    CHECK_NOTHROW(check_placement(a.scene, a.placement));
    CHECK(a.placement.normal.z() >= 0.0);
  }
  CHECK(format_scene(random_canyon(1).scene, std::nullopt) !=
        format_scene(random_canyon(2).scene, std::nullopt));
}

TEST_CASE("seeded streams are reproducible and distinct") {
  auto a = Rng::stream(5, 9), b = Rng::stream(5, 9), c = Rng::stream(5, 10);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("open ground: sky term equals DHI and nothing is reflected onto a flat panel") {
  CanyonScene open;
  const auto sky = build_sky(600, 150, SolarPosition{deg2rad(40), deg2rad(160)}, 120);
  const SolarPosition sun{deg2rad(40), deg2rad(160)};
  OracleParams p;
  p.samples = 16384;
  const auto e = panel_irradiance_oracle(open, flat_at(Vec3(0, 0, 0.01)), sky, sun, p);
  CHECK(e.e_sun == doctest::Approx(600 * std::cos(deg2rad(40))));
  CHECK(within(e.e_sky, 150.0, e.sky_stderr, 0.01));
  CHECK(e.e_scene == 0.0);
}

TEST_CASE("vertical panel over open ground sees half the reflected global irradiance") {
  CanyonScene open;
  open.ground_albedo = 0.25;
  const SolarPosition sun{deg2rad(50), deg2rad(200)};
  const auto sky = SkyRadianceModel::isotropic(sun, 500, 100);
  const PanelPlacement wall{Vec3(0, 0, 1.5), Direction(0, -1, 0), 0.01};
  OracleParams p;
  p.samples = 16384;
  p.bounces = 1;
  const auto e = panel_irradiance_oracle(open, wall, sky, sun, p);
  const double ghi = 500 * std::cos(deg2rad(50)) + 100;
  CHECK(within(e.e_scene, 0.25 * ghi / 2, e.scene_stderr, 0.01));
  CHECK(within(e.e_sky, 50.0, e.sky_stderr, 0.01));
}

TEST_CASE("sky view factor at the bottom of a long street") {
  // Horizontal point midway between walls: SVF = sin(atan(w / 2h)).
  for (const auto& [w, h] : {std::pair{10.0, 10.0}, {20.0, 5.0}}) {
    const auto scene = street(w, h);
    const SolarPosition sun{deg2rad(30), 0.0};
    const auto sky = SkyRadianceModel::isotropic(sun, 0, 100);
    OracleParams p;
    p.samples = 16384;
    p.bounces = 0;
    const auto e = panel_irradiance_oracle(scene, flat_at(Vec3(0, 0, 0.01)), sky, sun, p);
    const double svf = std::sin(std::atan(w / (2 * h)));
    CHECK(within(e.e_sky, 100 * svf, e.sky_stderr, 0.01));
    CHECK(e.e_scene == 0.0);
  }
}

TEST_CASE("scene irradiance is exactly scale invariant with paired seeds") {
  const SolarPosition sun{deg2rad(40), deg2rad(150)};
  const auto sky = build_sky(700, 120, sun, 200);
  OracleParams p;
  p.samples = 1024;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rc = random_canyon(seed);
    for (const double k : {0.01, 10.0, 100.0})
      CHECK(check_scale_invariance(rc.scene, rc.placement, sky, sun, k, p) < 1e-9);
  }
  CHECK_ERROR_KIND(check_scale_invariance(street(10, 10), flat_at(Vec3(0, 0, 0.01)), sky, sun, -1.0, p),
                   ErrorKind::domain);
}

TEST_CASE("oracle parameter validation") {
  const SolarPosition sun{0.5, 0.0};
  const auto sky = SkyRadianceModel::isotropic(sun, 0, 100);
  OracleParams p;
  p.samples = 0;
  CHECK_ERROR_KIND(panel_irradiance_oracle(CanyonScene{}, flat_at(Vec3(0, 0, 0.01)), sky, sun, p),
                   ErrorKind::config);
  p.samples = 16;
  p.bounces = -1;
  CHECK_ERROR_KIND(panel_irradiance_oracle(CanyonScene{}, flat_at(Vec3(0, 0, 0.01)), sky, sun, p),
                   ErrorKind::config);
}

TEST_CASE("oracle series is zero at night and deterministic") {
  const auto rc = random_canyon(3);
  const auto w = synth_clear_span(40, -74, parse_instant("2025-03-20T00:00:00Z"),
                                  parse_instant("2025-03-20T12:00:00Z"), 3600);
  OracleParams p;
  p.samples = 256;
  const auto a = oracle_series(rc.scene, rc.placement, 40, -74, w, p);
  const auto b = oracle_series(rc.scene, rc.placement, 40, -74, w, p);
  REQUIRE(a.size() == w.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].e_total == b[i].e_total);
    if (!solar_position({40, -74, w.records[i].instant}).above_horizon()) CHECK(a[i].e_total == 0.0);
  }
}

TEST_CASE("boundary estimate") {
  const auto scene = street(10, 10);
  const PanelPlacement pl{Vec3(0, 0, 1.0), Direction(0, 1, 0), 0.01};
  BoundaryParams bp;
  bp.samples_per_axis = 64;
  const auto below = check_boundary_term(scene, pl, SolarPosition{deg2rad(95), 0}, 0.1, bp);
  CHECK(below.fraction == 0.0);
  CHECK(below.lit_samples == 0);
  CHECK_ERROR_KIND(check_boundary_term(scene, pl, SolarPosition{0.5, 0}, 0.0, bp), ErrorKind::domain);
  bp.samples_per_axis = 0;
  CHECK_ERROR_KIND(check_boundary_term(scene, pl, SolarPosition{0.5, 0}, 0.1, bp), ErrorKind::config);
  bp.samples_per_axis = 128;
  // The band fraction grows with the band width.
  const SolarPosition sun{deg2rad(40), deg2rad(180)};
  const auto narrow = check_boundary_term(scene, pl, sun, 0.1, bp);
  const auto wide = check_boundary_term(scene, pl, sun, 0.5, bp);
  CHECK(narrow.lit_samples > 0);
  CHECK(narrow.fraction > 0.0);
  CHECK(wide.fraction > narrow.fraction);
  CHECK(wide.fraction <= 1.0);
}

TEST_CASE("rendered sky labels agree with ray casting and the sun is detectable") {
  const auto scene = street(10, 12);
  const PanelPlacement pl{Vec3(1, 2, 0.05), Direction::from_angles(deg2rad(20), deg2rad(180)), 0.05};
  const SolarPosition sun{deg2rad(25), deg2rad(170)};
  const auto sky = build_sky(750, 110, sun, 172);
  RenderParams rp;
  rp.size = 384;
  rp.samples_per_axis = 2;
  const auto r = render_hemisphere(scene, pl, sky, sun, rp);
  CHECK(r.image.width() == 384);
  CHECK(r.r_ec.apply(Direction(0, 0, 1)).angle_to(pl.normal) < 1e-12);
  REQUIRE(r.image.metadata.gravity.has_value());
  CHECK(Direction(r.r_ec.apply(*r.image.metadata.gravity)).angle_to(Direction(0, 0, -1)) < 1e-9);

  const auto proj = ProjectionModel::fisheye();
  int checked = 0, sky_px = 0;
  for (int y = 0; y < 384; y += 7)
    for (int x = 0; x < 384; x += 7) {
      const auto c = proj.unproject({x + 0.5, y + 0.5}, 384, 384);
      if (!c) continue;
      const Vec3 d = r.r_ec.apply(*c);
      const bool open = d.z() > 0 && unoccluded(scene, pl.position + 1e-6 * pl.normal.vec(), d);
      CHECK(r.sky_labels.at(x, y) == (open ? 1 : 0));
      sky_px += open;
      ++checked;
    }
  CHECK(sky_px > 0);
  CHECK(sky_px < checked);

  const auto found = detect_sun(r.image, proj);
  REQUIRE(found.has_value());
  const auto sun_cam = r.r_ec.inverse().apply(sun.direction());
  CHECK(testing::deg(found->angle_to(sun_cam)) < 1.0);
}

TEST_CASE("oracle predictor over sun bins") {
  const auto scene = street(10, 10);
  const PanelPlacement pl{Vec3(0, -4, 1.0), Direction(0, 1, 0), 0.01};
  OracleParams p;
  p.samples = 256;
  p.sky_grid_deg = 5.0;
  const auto f = oracle_predictor(scene, pl, p, 80);
  double max = 0.0;
  for (const double v : f.values()) {
    CHECK(v >= 0.0);
    max = std::max(max, v);
  }
  CHECK(max > 0.0);
  CHECK_ERROR_KIND(oracle_predictor(scene, flat_at(Vec3(0, -7, 1)), p), ErrorKind::geometry);
}
