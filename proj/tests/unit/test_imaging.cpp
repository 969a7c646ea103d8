#include <png.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "panelcast/fileio.hpp"
#include "panelcast/image.hpp"
#include "panelcast/projection.hpp"
#include "test_support.hpp"

using namespace panelcast;
namespace fs = std::filesystem;

TEST_CASE("fisheye projection round-trips every in-view direction") {
  std::mt19937_64 rng(17);
  for (const double fov_deg : {90.0, 180.0, 220.0}) {
    const auto proj = ProjectionModel::fisheye(deg2rad(fov_deg));
    int inside = 0;
    for (int i = 0; i < 5000; ++i) {
      const auto d = testing::random_direction(rng);
      const auto p = proj.project(d.vec(), 512, 512);
      if (d.zenith() > deg2rad(fov_deg / 2) + 1e-12) {
        CHECK_FALSE(p.has_value());
        continue;
      }
      REQUIRE(p.has_value());
      ++inside;
      const auto back = proj.unproject(*p, 512, 512);
      REQUIRE(back.has_value());
      CHECK(testing::deg(Direction(*back).angle_to(d)) < 1e-9);
    }
    CHECK(inside > 0);
  }
}

TEST_CASE("fisheye geometry: optical axis at the center, image top is camera +y") {
  const auto proj = ProjectionModel::fisheye();
  const auto c = proj.project(Vec3(0, 0, 1), 100, 100);
  CHECK(c->u == doctest::Approx(50.0));
  CHECK(c->v == doctest::Approx(50.0));
  const auto top = proj.project(Vec3(0, 1, 0), 100, 100);
  CHECK(top->u == doctest::Approx(50.0));
  CHECK(top->v == doctest::Approx(0.0).epsilon(1e-12));
  const auto right = proj.project(Vec3(1, 0, 1), 100, 100);
  // Equidistant: 45 degrees lands halfway to the rim.
  CHECK(right->u == doctest::Approx(75.0));
  CHECK_FALSE(proj.unproject({0.5, 0.5}, 100, 100).has_value());
}

TEST_CASE("equirectangular projection round-trips the whole sphere") {
  std::mt19937_64 rng(23);
  const auto proj = ProjectionModel::equirectangular();
  for (int i = 0; i < 5000; ++i) {
    const auto d = testing::random_direction(rng);
    const auto p = proj.project(d.vec(), 720, 360);
    REQUIRE(p.has_value());
    CHECK(p->u >= 0.0);
    CHECK(p->u < 720.0);
    const auto back = proj.unproject(*p, 720, 360);
    REQUIRE(back.has_value());
    CHECK(testing::deg(Direction(*back).angle_to(d)) < 1e-9);
  }
  CHECK_FALSE(proj.unproject({-1.0, 10.0}, 720, 360).has_value());
  CHECK_FALSE(proj.unproject({10.0, 361.0}, 720, 360).has_value());
}

TEST_CASE("projection shape rules") {
  CHECK(ProjectionModel::fisheye().shape_ok(64, 64));
  CHECK_FALSE(ProjectionModel::fisheye().shape_ok(64, 32));
  CHECK(ProjectionModel::equirectangular().shape_ok(64, 32));
  CHECK_FALSE(ProjectionModel::equirectangular().shape_ok(64, 64));
  CHECK_FALSE(ProjectionModel::equirectangular().shape_ok(0, 0));
  CHECK_ERROR_KIND(ProjectionModel::fisheye().check_shape(64, 63), ErrorKind::format);
  CHECK_ERROR_KIND(ProjectionModel::equirectangular().check_shape(63, 32), ErrorKind::format);
  CHECK_ERROR_KIND(ProjectionModel::fisheye(0.0).check_shape(64, 64), ErrorKind::config);
  CHECK_ERROR_KIND(ProjectionModel::fisheye(kTwoPi).check_shape(64, 64), ErrorKind::config);
}

namespace {

HdrImage gradient(int w, int h) {
  HdrImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.set(x, y, 0.01f * x, 0.5f + y * 3.0f, x == y ? 1000.0f : 0.25f);
  return img;
}

}  // namespace

TEST_CASE("PFM round trip is bit exact, including orientation") {
  const auto dir = testing::scratch_dir("pfm");
  const auto img = gradient(13, 7);
  write_pfm(dir / "a.pfm", img);
  const auto back = read_pfm(dir / "a.pfm");
  CHECK(back.width() == 13);
  CHECK(back.height() == 7);
  CHECK(back.data() == img.data());
  // Rows are stored bottom-up on disk: the first float is the bottom-left pixel.
  const auto bytes = read_file(dir / "a.pfm");
  float first;
  std::memcpy(&first, bytes.data() + bytes.size() - 13 * 7 * 12, sizeof first);
  CHECK(first == img.pixel(0, 6)[0]);
  fs::remove_all(dir);
}

TEST_CASE("Radiance HDR round trip within RGBE precision") {
  const auto dir = testing::scratch_dir("hdr");
  const auto img = gradient(40, 20);
  write_radiance_hdr(dir / "a.hdr", img);
  const auto back = read_radiance_hdr(dir / "a.hdr");
  REQUIRE(back.width() == 40);
  REQUIRE(back.height() == 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 40; ++x) {
      const float* a = img.pixel(x, y);
      const float* b = back.pixel(x, y);
      const float m = std::max({a[0], a[1], a[2]});
      for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - b[c]) <= m / 128.0f + 1e-6f);
    }
  fs::remove_all(dir);
}

TEST_CASE("image readers reject malformed files") {
  const auto dir = testing::scratch_dir("bad");
  write_file_atomic(dir / "x.pfm", "P6\n1 1\n255\n...");
  CHECK_ERROR_KIND(read_pfm(dir / "x.pfm"), ErrorKind::format);
  write_file_atomic(dir / "t.pfm", "PF\n4 4\n-1.0\nshort");
  CHECK_ERROR_KIND(read_pfm(dir / "t.pfm"), ErrorKind::format);
  write_file_atomic(dir / "x.hdr", "not radiance\n");
  CHECK_ERROR_KIND(read_radiance_hdr(dir / "x.hdr"), ErrorKind::format);
  write_file_atomic(dir / "x.tif", "II*");
  CHECK_ERROR_KIND(read_hdr_image(dir / "x.tif"), ErrorKind::format);
  CHECK_ERROR_KIND(read_pfm(dir / "missing.pfm"), ErrorKind::io);
  write_file_atomic(dir / "m.pgm", "P2\n2 2\n255\n0 0 0 0\n");
  CHECK_ERROR_KIND(read_mask(dir / "m.pgm"), ErrorKind::format);
  write_file_atomic(dir / "m16.pgm", "P5\n2 2\n65535\n12345678");
  CHECK_ERROR_KIND(read_mask(dir / "m16.pgm"), ErrorKind::format);
  fs::remove_all(dir);
}

TEST_CASE("validate rejects negative and non-finite radiance") {
  HdrImage img(4, 4, 1.0f);
  CHECK_NOTHROW(img.validate());
  img.set(1, 1, -0.5f, 0, 0);
  CHECK_ERROR_KIND(img.validate(), ErrorKind::format);
  img.set(1, 1, std::numeric_limits<float>::infinity(), 0, 0);
  CHECK_ERROR_KIND(img.validate(), ErrorKind::format);
  CHECK_ERROR_KIND(HdrImage(0, 4), ErrorKind::format);
}

TEST_CASE("luminance uses Rec. 709 weights") {
  HdrImage img(1, 1);
  img.set(0, 0, 1, 0, 0);
  CHECK(img.luminance(0, 0) == doctest::Approx(0.2126));
  img.set(0, 0, 1, 1, 1);
  CHECK(img.luminance(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("log compression inverts") {
  const auto img = gradient(9, 9);
  const auto back = log_expand(log_compress(img));
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    CHECK(back.data()[i] == doctest::Approx(img.data()[i]).epsilon(1e-5));
  }
  CHECK(log_compress(img).pixel(3, 3)[2] == doctest::Approx(std::log(1001.0)).epsilon(1e-6));
}

TEST_CASE("PGM and PNG masks") {
  const auto dir = testing::scratch_dir("mask");
  Mask m(5, 3);
  m.at(0, 0) = 1;
  m.at(4, 2) = 1;
  m.at(2, 1) = 1;
  write_pgm_mask(dir / "m.pgm", m);
  const auto back = read_mask(dir / "m.pgm");
  CHECK(back.bits == m.bits);
  CHECK(back.count() == 3);

  std::vector<png_byte> gray(15, 0);
  gray[0] = 255;
  gray[7] = 200;  // >= 128 counts as sky
  gray[14] = 127;
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = 5;
  png.height = 3;
  png.format = PNG_FORMAT_GRAY;
  REQUIRE(png_image_write_to_file(&png, (dir / "m.png").c_str(), 0, gray.data(), 0, nullptr));
  const auto pm = read_mask(dir / "m.png");
  CHECK(pm.width == 5);
  CHECK(pm.at(0, 0) == 1);
  CHECK(pm.at(2, 1) == 1);
  CHECK(pm.at(4, 2) == 0);
  CHECK(pm.count() == 2);
  fs::remove_all(dir);
}

TEST_CASE("metadata sidecar round trip and validation") {
  const auto dir = testing::scratch_dir("meta");
  ImageMetadata meta;
  meta.capture = GeoTime{40.5, -74.25, parse_instant("2025-06-30T17:00:00Z")};
  meta.gravity = Vec3(0.1, -0.2, -0.97);
  const auto img_path = dir / "cap.pfm";
  write_pfm(img_path, HdrImage(8, 8, 0.5f));
  CHECK(metadata_path_for(img_path).string() == img_path.string() + ".meta");
  write_metadata(metadata_path_for(img_path), meta);
  const auto img = read_hdr_image(img_path);
  REQUIRE(img.metadata.capture.has_value());
  CHECK(img.metadata.capture->latitude_deg == 40.5);
  CHECK(img.metadata.capture->longitude_deg == -74.25);
  CHECK(format_instant(img.metadata.capture->instant) == "2025-06-30T17:00:00Z");
  REQUIRE(img.metadata.gravity.has_value());
  CHECK(*img.metadata.gravity == meta.gravity);

  write_file_atomic(dir / "half.meta", "latitude = 1\n");
  CHECK_ERROR_KIND(read_metadata(dir / "half.meta"), ErrorKind::parse);
  write_file_atomic(dir / "g.meta", "gravity_x = 1\ngravity_y = 0\n");
  CHECK_ERROR_KIND(read_metadata(dir / "g.meta"), ErrorKind::parse);
  write_file_atomic(dir / "n.meta", "latitude = north\nlongitude = 0\ninstant = 2025-01-01T00:00:00Z\n");
  CHECK_ERROR_KIND(read_metadata(dir / "n.meta"), ErrorKind::parse);
  fs::remove_all(dir);
}
