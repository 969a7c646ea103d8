#include "cli_support.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"
#include "panelcast/orientation.hpp"

namespace panelcast::cli {

void add_config_option(Command& command) {
  command.app->add_option("--config", command.config,
                          "key = value file mirroring the long flags; flags win");
}

namespace {

bool truthy(const std::string& value, const std::string& key) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::config, "config key '" + key + "' expects true or false");
}

}  // namespace

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

std::vector<std::string> config_arguments(const CLI::App& command, const std::string& path,
                                          const std::vector<std::string>& given) {
  const auto kv = parse_key_values(read_file(path), path);
  auto on_command_line = [&](const std::string& flag) {
    for (const auto& a : given)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> out;
  for (const auto& [key, value] : kv) {
    if (key == "config") fail(ErrorKind::config, path + ": config files cannot nest");
    const CLI::Option* opt = command.get_option_no_throw("--" + key);
    if (opt == nullptr) fail(ErrorKind::config, path + ": unknown key '" + key + "'");
    if (on_command_line("--" + key)) continue;
    if (opt->get_expected_max() == 0) {
      if (truthy(value, key)) out.push_back("--" + key);
      continue;
    }
    if (opt->get_expected_max() > 1) {
      for (const auto& item : split(value, ',')) {
        const auto t = trim(item);
        if (t.empty()) continue;
        out.push_back("--" + key);
        out.push_back(t);
      }
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

void add_image_flags(CLI::App& app, CaptureFlags& flags, bool with_mask) {
  app.add_option("--image", flags.image, "HDR capture (.pfm or .hdr; sidecar <image>.meta)");
  if (with_mask) app.add_option("--mask", flags.mask, "external sky mask (PGM/PNG, 255 = sky)");
  app.add_option("--projection", flags.projection, "fisheye or equirect")
      ->check(CLI::IsMember({"fisheye", "equirect"}));
  app.add_option("--fov-deg", flags.fov_deg, "fisheye field of view");
}

void add_location_flags(CLI::App& app, CaptureFlags& flags) {
  app.add_option("--lat", flags.latitude, "latitude, degrees North");
  app.add_option("--lon", flags.longitude, "longitude, degrees East");
}

void add_rotation_flags(CLI::App& app, CaptureFlags& flags) {
  app.add_option("--rotation", flags.rotation, "camera -> Earth rotation file");
  app.add_option("--capture-time", flags.capture_time,
                 "capture instant (ISO-8601 UTC), overrides metadata");
  app.add_option("--sun-ratio", flags.sun_ratio, "sun detection threshold, x median luminance");
}

void add_segmentation_flags(CLI::App& app, CaptureFlags& flags) {
  auto& s = flags.segmentation;
  app.add_option("--sky-luminance-ratio", s.sky_luminance_ratio, "sky: min luminance / median");
  app.add_option("--blue-chromaticity", s.blue_chromaticity, "sky: min b / (r + g + b)");
  app.add_option("--bright-ratio", s.bright_ratio, "always sky above this x median");
  app.add_option("--min-component-fraction", s.min_component_fraction,
                 "drop sky components smaller than this share of the image");
  app.add_option("--closing-radius", s.closing_radius, "morphological closing radius, pixels");
}

ProjectionModel projection_from(const CaptureFlags& flags) {
  if (flags.projection == "equirect") return ProjectionModel::equirectangular();
  if (!(flags.fov_deg > 0.0 && flags.fov_deg < 360.0)) {
    fail(ErrorKind::config, "--fov-deg must be in (0, 360)");
  }
  return ProjectionModel::fisheye(deg2rad(flags.fov_deg));
}

Capture load_capture(const CaptureFlags& flags) {
  if (flags.image.empty()) fail(ErrorKind::config, "--image is required");
  Capture c;
  c.image = read_hdr_image(flags.image);
  c.projection = projection_from(flags);
  c.projection.check_shape(c.image.width(), c.image.height());
  std::optional<GeoTime> geo = c.image.metadata.capture;
  if (!flags.capture_time.empty() || flags.latitude || flags.longitude) {
    GeoTime g = geo.value_or(GeoTime{});
    bool complete = geo.has_value();
    if (!flags.capture_time.empty()) g.instant = parse_instant(flags.capture_time);
    if (flags.latitude) g.latitude_deg = *flags.latitude;
    if (flags.longitude) g.longitude_deg = *flags.longitude;
    complete = complete || (!flags.capture_time.empty() && flags.latitude && flags.longitude);
    if (complete) geo = g;
  }
  c.geo = geo;
  return c;
}

SkyAperture capture_aperture(const Capture& capture, const CaptureFlags& flags) {
  if (!flags.mask.empty()) {
    return SkyAperture(read_mask(flags.mask), capture.projection);
  }
  return segment_sky(capture.image, capture.projection, flags.segmentation);
}

Rotation capture_rotation(const Capture& capture, const CaptureFlags& flags) {
  if (!flags.rotation.empty()) return parse_rotation(read_file(flags.rotation), flags.rotation);
  if (!capture.geo) {
    fail(ErrorKind::config, "no --rotation and no capture place/time to orient the image");
  }
  const auto sun_cam = detect_sun(capture.image, capture.projection, flags.sun_ratio);
  if (!sun_cam) fail(ErrorKind::geometry, "no sun found in the image; supply --rotation");
  const auto gravity = gravity_from_metadata(capture.image);
  if (gravity.assumed_level) {
    std::cerr << "warning: no gravity in metadata, assuming a level capture\n";
  }
  const auto sun = solar_position(*capture.geo);
  return azimuth_align(gravity.gravity, Direction(0, 0, -1), *sun_cam, sun.direction());
}

std::pair<double, double> site_location(const CaptureFlags& flags, const Capture* capture) {
  if (flags.latitude && flags.longitude) return {*flags.latitude, *flags.longitude};
  if (capture && capture->geo) {
    return {flags.latitude.value_or(capture->geo->latitude_deg),
            flags.longitude.value_or(capture->geo->longitude_deg)};
  }
  fail(ErrorKind::config, "--lat and --lon are required");
}

void add_panel_flags(CLI::App& app, PanelFlags& flags) {
  app.add_option("--normal", flags.normal, "panel normal, Earth frame (x,y,z = East,North,Up)");
  app.add_option("--tilt-deg", flags.tilt_deg, "panel tilt from horizontal");
  app.add_option("--azimuth-deg", flags.azimuth_deg, "panel azimuth, clockwise from North");
}

PanelPose resolve_panel(const PanelFlags& flags, const std::optional<Rotation>& r_ec) {
  if (!flags.normal.empty()) return PanelPose(Direction(parse_vec3(flags.normal, "--normal")));
  if (flags.tilt_deg || flags.azimuth_deg) {
    return PanelPose::from_tilt_azimuth(deg2rad(flags.tilt_deg.value_or(0.0)),
                                        deg2rad(flags.azimuth_deg.value_or(180.0)));
  }
  if (r_ec) return PanelPose(r_ec->apply(Direction(0, 0, 1)));
  fail(ErrorKind::config, "panel orientation needs --normal, --tilt-deg/--azimuth-deg or an image");
}

std::optional<WeatherRecord> record_near(const WeatherSeries& weather, Instant t) {
  const WeatherRecord* best = nullptr;
  std::int64_t best_gap = 0;
  for (const auto& rec : weather.records) {
    const auto gap = std::llabs(seconds_since_epoch(rec.instant) - seconds_since_epoch(t));
    if (!best || gap < best_gap) {
      best = &rec;
      best_gap = gap;
    }
  }
  if (!best) return std::nullopt;
  const std::int64_t limit = std::max<std::int64_t>(weather.nominal_step, 0);
  if (best_gap > limit) return std::nullopt;
  return *best;
}

void emit(const std::string& text, const std::string& path) {
  std::cout << text;
  if (!path.empty()) write_file_atomic(path, text);
}

}  // namespace panelcast::cli
