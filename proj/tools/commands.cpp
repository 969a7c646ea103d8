#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "panelcast/canyon.hpp"
#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"
#include "panelcast/orientation.hpp"
#include "panelcast/panel_geometry.hpp"
#include "panelcast/plot.hpp"
#include "panelcast/scene_function.hpp"
#include "panelcast/transposition.hpp"

namespace panelcast::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string line(const std::string& key, const std::string& value) {
  return key + " = " + value + "\n";
}

// --- sun-position ---------------------------------------------------------

void add_sun_position(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    double lat = 0.0, lon = 0.0;
    std::string time, out;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  cmd->app = root.add_subcommand("sun-position", "Solar zenith and azimuth for a place and time");
  cmd->app->add_option("--lat", f->lat, "latitude, degrees North")->required();
  cmd->app->add_option("--lon", f->lon, "longitude, degrees East")->required();
  cmd->app->add_option("--time", f->time, "ISO-8601 UTC instant")->required();
  cmd->app->add_option("--out", f->out, "also write the result here");
  cmd->run = [f] {
    const auto sun = solar_position({f->lat, f->lon, parse_instant(f->time)});
    std::string text = line("zenith_deg", fmt(rad2deg(sun.zenith)));
    text += line("azimuth_deg", fmt(rad2deg(sun.azimuth)));
    text += line("elevation_deg", fmt(90.0 - rad2deg(sun.zenith)));
    text += line("direction", sun.direction().to_string());
    emit(text, f->out);
  };
  out.push_back(std::move(cmd));
}

// --- orient ---------------------------------------------------------------

void add_orient(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    CaptureFlags capture;
    std::string sun_cam, gravity_cam, method = "azimuth-align", out;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app =
      root.add_subcommand("orient", "Camera -> Earth rotation from sun and gravity directions");
  app->add_option("--sun-cam", f->sun_cam, "sun direction in the camera frame (x,y,z)");
  app->add_option("--gravity-cam", f->gravity_cam, "gravity direction in the camera frame (x,y,z)");
  add_image_flags(*app, f->capture, false);
  add_location_flags(*app, f->capture);
  app->add_option("--time", f->capture.capture_time, "capture instant (ISO-8601 UTC)");
  app->add_option("--sun-ratio", f->capture.sun_ratio, "sun detection threshold, x median luminance");
  app->add_option("--method", f->method, "azimuth-align or kabsch")
      ->check(CLI::IsMember({"azimuth-align", "kabsch"}));
  app->add_option("--out", f->out, "rotation file to write")->required();
  cmd->run = [f] {
    std::optional<Capture> capture;
    if (!f->capture.image.empty()) capture = load_capture(f->capture);
    std::optional<GeoTime> geo;
    if (capture && capture->geo) geo = capture->geo;
    if (!geo) {
      if (!f->capture.latitude || !f->capture.longitude || f->capture.capture_time.empty()) {
        fail(ErrorKind::config, "--lat, --lon and --time are required without image metadata");
      }
      geo = GeoTime{*f->capture.latitude, *f->capture.longitude,
                    parse_instant(f->capture.capture_time)};
    }
    std::optional<Direction> sun_cam;
    if (!f->sun_cam.empty()) sun_cam = Direction(parse_vec3(f->sun_cam, "--sun-cam"));
    else if (capture) sun_cam = detect_sun(capture->image, capture->projection, f->capture.sun_ratio);
    if (!sun_cam) fail(ErrorKind::geometry, "no sun direction: pass --sun-cam or an image with a visible sun");
    Direction gravity(0, 0, -1);
    if (!f->gravity_cam.empty()) {
      gravity = Direction(parse_vec3(f->gravity_cam, "--gravity-cam"));
    } else if (capture) {
      const auto g = gravity_from_metadata(capture->image);
      if (g.assumed_level) std::cerr << "warning: no gravity in metadata, assuming a level capture\n";
      gravity = g.gravity;
    } else {
      std::cerr << "warning: no --gravity-cam, assuming a level capture\n";
    }
    const auto sun = solar_position(*geo);
    const Direction down(0, 0, -1);
    const Rotation r = f->method == "kabsch"
                           ? kabsch({{*sun_cam, sun.direction()}, {gravity, down}})
                           : azimuth_align(gravity, down, *sun_cam, sun.direction());
    write_file_atomic(f->out, format_rotation(r));
    std::cout << line("sun_residual_deg", fmt(rad2deg(r.apply(*sun_cam).angle_to(sun.direction()))));
    std::cout << line("gravity_residual_deg", fmt(rad2deg(r.apply(gravity).angle_to(down))));
  };
  out.push_back(std::move(cmd));
}

// --- segment-sky ------------------------------------------------------------

void add_segment_sky(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    CaptureFlags capture;
    std::string out, normal_cam = "0,0,1";
    double grid_deg = 1.0;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("segment-sky", "Sky mask and sky view factor of a capture");
  add_image_flags(*app, f->capture, false);
  add_segmentation_flags(*app, f->capture);
  app->add_option("--normal-cam", f->normal_cam, "panel normal in the camera frame for the SVF");
  app->add_option("--grid-deg", f->grid_deg, "SVF quadrature step, degrees");
  app->add_option("--out", f->out, "mask to write (PGM, or PNG by extension)")->required();
  cmd->run = [f] {
    const auto capture = load_capture(f->capture);
    const auto aperture = segment_sky(capture.image, capture.projection, f->capture.segmentation);
    write_pgm_mask(f->out, aperture.mask());
    const Direction n(parse_vec3(f->normal_cam, "--normal-cam"));
    std::cout << line("sky_pixels", std::to_string(aperture.mask().count()));
    std::cout << line("svf", fmt(sky_view_factor(aperture, n, f->grid_deg)));
  };
  out.push_back(std::move(cmd));
}

// --- forecast / annual --------------------------------------------------------

struct SiteFlags {
  CaptureFlags capture;
  PanelFlags panel;
  std::string predictor = "analytic";
  std::string scene_function;
  double albedo = 0.2;
  double grid_deg = 1.0;
};

void add_site_flags(CLI::App& app, SiteFlags& f) {
  add_image_flags(app, f.capture, true);
  add_location_flags(app, f.capture);
  add_rotation_flags(app, f.capture);
  add_segmentation_flags(app, f.capture);
  add_panel_flags(app, f.panel);
  app.add_option("--predictor", f.predictor, "scene term: none, analytic or function")
      ->check(CLI::IsMember({"none", "analytic", "function"}));
  app.add_option("--scene-function", f.scene_function, "36x144 scene irradiance CSV (function predictor)");
  app.add_option("--albedo", f.albedo, "analytic predictor albedo");
  app.add_option("--grid-deg", f.grid_deg, "sky quadrature step, degrees");
}

Site build_site(const SiteFlags& f, const WeatherSeries* weather) {
  const Capture capture = load_capture(f.capture);
  Site site;
  site.aperture = capture_aperture(capture, f.capture);
  site.r_ec = capture_rotation(capture, f.capture);
  site.panel = resolve_panel(f.panel, site.r_ec);
  std::tie(site.latitude_deg, site.longitude_deg) = site_location(f.capture, &capture);
  site.grid_step_deg = f.grid_deg;
  if (f.predictor == "function") {
    if (f.scene_function.empty()) fail(ErrorKind::config, "--predictor function needs --scene-function");
    site.predictor = std::make_shared<GridScenePredictor>(load_scene_function(f.scene_function));
  } else if (f.predictor == "analytic") {
    std::optional<CaptureWeather> cw;
    if (weather && capture.geo) {
      if (auto rec = record_near(*weather, capture.geo->instant)) {
        cw = CaptureWeather{*rec, solar_position({site.latitude_deg, site.longitude_deg, rec->instant})};
      }
    }
    site.predictor = std::make_shared<GridScenePredictor>(analytic_canyon_predictor(
        site.aperture, site.r_ec, site.panel.normal(), f.albedo, cw, f.grid_deg));
  }
  return site;
}

void add_forecast(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    SiteFlags site;
    std::string weather, out, model_tag;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("forecast", "Panel irradiance time series for a capture and weather");
  add_site_flags(*app, f->site);
  app->add_option("--weather", f->weather, "weather CSV")->required();
  app->add_option("--out", f->out, "forecast CSV to write")->required();
  app->add_option("--model-tag", f->model_tag, "value of an extra `model` column");
  cmd->run = [f] {
    const auto weather = load_weather(f->weather);
    for (const auto& w : weather.warnings) std::cerr << "warning: " << w << "\n";
    const Site site = build_site(f->site, &weather);
    const auto points = forecast_series(site, weather);
    save_forecast(f->out, points, f->model_tag);
    std::cout << line("records", std::to_string(points.size()));
    std::cout << line("total_kwh_m2", fmt(integrate_kwh(points)));
  };
  out.push_back(std::move(cmd));
}

WeatherSeries climate_input(const std::string& tmy, bool synthetic, double lat, double lon) {
  if (!tmy.empty() && synthetic) fail(ErrorKind::config, "use either --tmy or --synthetic-clear");
  if (synthetic) return synth_clear_year(lat, lon);
  if (tmy.empty()) fail(ErrorKind::config, "--tmy or --synthetic-clear is required");
  auto w = load_weather(tmy);
  for (const auto& msg : w.warnings) std::cerr << "warning: " << msg << "\n";
  return w;
}

void add_annual(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    SiteFlags site;
    std::string tmy, out;
    bool synthetic = false;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("annual", "Annual irradiation (kWh/m^2) of a panel");
  add_site_flags(*app, f->site);
  app->add_option("--tmy", f->tmy, "annual weather CSV");
  app->add_flag("--synthetic-clear", f->synthetic, "use the deterministic clear-sky year");
  app->add_option("--out", f->out, "also write the result here");
  cmd->run = [f] {
    const Capture capture = load_capture(f->site.capture);
    const auto [lat, lon] = site_location(f->site.capture, &capture);
    const auto tmy = climate_input(f->tmy, f->synthetic, lat, lon);
    const Site site = build_site(f->site, &tmy);
    emit(line("annual_kwh_m2", fmt(annual_irradiation(site, tmy))), f->out);
  };
  out.push_back(std::move(cmd));
}

// --- best-orientation -------------------------------------------------------

void add_best_orientation(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    CaptureFlags capture;
    SearchGrid grid;
    double current_tilt = 0.0, current_azimuth = 180.0, albedo = 0.2, grid_deg = 1.0;
    int view_size = 0;
    std::string tmy, out, candidates_out;
    bool synthetic = false;
  };
  auto f = std::make_shared<Flags>();
  f->capture.projection = "equirect";
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("best-orientation", "Search panel tilt/azimuth for the largest annual yield");
  app->add_option("--image", f->capture.image, "equirectangular HDR capture")->required();
  add_location_flags(*app, f->capture);
  add_rotation_flags(*app, f->capture);
  add_segmentation_flags(*app, f->capture);
  app->add_option("--tmy", f->tmy, "annual weather CSV");
  app->add_flag("--synthetic-clear", f->synthetic, "use the deterministic clear-sky year");
  app->add_option("--tilt-step", f->grid.tilt_step_deg, "tilt step, degrees");
  app->add_option("--azimuth-step", f->grid.azimuth_step_deg, "azimuth step, degrees");
  app->add_option("--max-tilt", f->grid.max_tilt_deg, "largest tilt searched, degrees");
  app->add_option("--current-tilt", f->current_tilt, "tilt of the installed panel");
  app->add_option("--current-azimuth", f->current_azimuth, "azimuth of the installed panel");
  app->add_option("--albedo", f->albedo, "analytic predictor albedo");
  app->add_option("--view-size", f->view_size, "fisheye view size, pixels (0: image height)");
  app->add_option("--grid-deg", f->grid_deg, "sky quadrature step, degrees");
  app->add_option("--out", f->out, "also write the result here");
  app->add_option("--candidates-out", f->candidates_out, "CSV of every candidate");
  cmd->run = [f] {
    const Capture capture = load_capture(f->capture);
    OrientationContext ctx;
    ctx.r_ec = capture_rotation(capture, f->capture);
    std::tie(ctx.latitude_deg, ctx.longitude_deg) = site_location(f->capture, &capture);
    ctx.albedo = f->albedo;
    ctx.segmentation = f->capture.segmentation;
    ctx.view_size = f->view_size;
    ctx.grid_step_deg = f->grid_deg;
    const auto tmy = climate_input(f->tmy, f->synthetic, ctx.latitude_deg, ctx.longitude_deg);
    const auto current = PanelPose::from_tilt_azimuth(deg2rad(f->current_tilt), deg2rad(f->current_azimuth));
    const auto r = best_orientation(capture.image, ctx, tmy, f->grid, current);
    std::string text = line("tilt_deg", fmt(r.best_tilt_deg));
    text += line("azimuth_deg", fmt(r.best_azimuth_deg));
    text += line("normal", r.best.normal().to_string());
    text += line("view_rotation", r.best_view_r_ec.to_string());
    text += line("annual_kwh_m2", fmt(r.best_annual_kwh));
    text += line("current_annual_kwh_m2", fmt(r.current_annual_kwh));
    text += line("gain_percent", fmt(r.gain_percent));
    emit(text, f->out);
    if (!f->candidates_out.empty()) {
      std::string csv = "tilt_deg,azimuth_deg,annual_kwh_m2\n";
      for (const auto& c : r.candidates) {
        csv += format_g6(c.tilt_deg) + ',' + format_g6(c.azimuth_deg) + ',' + fmt(c.annual_kwh) + '\n';
      }
      write_file_atomic(f->candidates_out, csv);
    }
  };
  out.push_back(std::move(cmd));
}

// --- baseline ---------------------------------------------------------------

void add_baseline(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    CaptureFlags capture;
    PanelFlags panel;
    std::optional<double> svf;
    double albedo = 0.2, grid_deg = 1.0;
    std::string weather, forecast, out;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("baseline", "Isotropic-sky transposition baseline");
  add_image_flags(*app, f->capture, true);
  add_location_flags(*app, f->capture);
  add_rotation_flags(*app, f->capture);
  add_segmentation_flags(*app, f->capture);
  add_panel_flags(*app, f->panel);
  app->add_option("--svf", f->svf, "sky view factor instead of an image aperture");
  app->add_option("--albedo", f->albedo, "ground albedo");
  app->add_option("--grid-deg", f->grid_deg, "SVF quadrature step, degrees");
  app->add_option("--weather", f->weather, "weather CSV")->required();
  app->add_option("--forecast", f->forecast, "forecast CSV to place side by side");
  app->add_option("--out", f->out, "CSV to write")->required();
  cmd->run = [f] {
    const auto weather = load_weather(f->weather);
    TranspositionConfig config;
    config.albedo = f->albedo;
    std::optional<Capture> capture;
    std::optional<SkyAperture> aperture;
    std::optional<Rotation> r_ec;
    if (!f->capture.image.empty()) {
      capture = load_capture(f->capture);
      aperture = capture_aperture(*capture, f->capture);
      r_ec = capture_rotation(*capture, f->capture);
    }
    config.panel = resolve_panel(f->panel, r_ec);
    if (f->svf) {
      config.svf_source = SvfSource::from_value;
      config.svf_value = *f->svf;
    } else if (!aperture) {
      fail(ErrorKind::config, "baseline needs --svf or --image");
    }
    const auto sky = BaselineSky::from_config(config, aperture, r_ec.value_or(Rotation()), f->grid_deg);
    const auto [lat, lon] = site_location(f->capture, capture ? &*capture : nullptr);
    const auto points = baseline_series(lat, lon, weather, sky, config);
    std::string text = format_forecast(points, "transposition");
    if (!f->forecast.empty()) {
      const auto other = load_forecast(f->forecast);
      if (other.size() != points.size()) fail(ErrorKind::format, f->forecast + ": record count differs from the weather");
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (other[i].instant != points[i].instant) {
          fail(ErrorKind::format, f->forecast + ": timestamps differ from the weather at " +
                                      format_instant(points[i].instant));
        }
      }
      const std::string body = format_forecast(other, "forecast");
      text += body.substr(body.find('\n') + 1);
    }
    write_file_atomic(f->out, text);
    std::cout << line("svf", fmt(sky.svf()));
    std::cout << line("total_kwh_m2", fmt(integrate_kwh(points)));
  };
  out.push_back(std::move(cmd));
}

// --- simulate ---------------------------------------------------------------

void add_simulate(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    std::string scene, save_scene, weather, out, render, labels, rotation_out, render_time, function_out;
    std::optional<std::uint64_t> random_canyon;
    std::optional<double> lat, lon;
    OracleParams oracle;
    RenderParams render_params;
    int doy = 80;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("simulate", "Canyon oracle: ground truth, renders, scene functions");
  app->add_option("--scene", f->scene, "scene file");
  app->add_option("--random-canyon", f->random_canyon, "generate a random canyon from this seed");
  app->add_option("--save-scene", f->save_scene, "write the scene file used");
  app->add_option("--lat", f->lat, "latitude, degrees North");
  app->add_option("--lon", f->lon, "longitude, degrees East");
  app->add_option("--weather", f->weather, "weather CSV for the ground-truth series");
  app->add_option("--out", f->out, "oracle forecast CSV to write");
  app->add_option("--samples", f->oracle.samples, "paths from the panel");
  app->add_option("--bounces", f->oracle.bounces, "Lambertian bounces");
  app->add_option("--seed", f->oracle.seed, "random seed (paths and renders)");
  app->add_option("--grid-deg", f->oracle.sky_grid_deg, "sky normalization step, degrees");
  app->add_option("--render", f->render, "fisheye render to write (.pfm or .hdr)");
  app->add_option("--labels", f->labels, "sky label mask of the render (PGM)");
  app->add_option("--rotation-out", f->rotation_out, "camera -> Earth rotation of the render");
  app->add_option("--render-time", f->render_time, "render instant (ISO-8601 UTC)");
  app->add_option("--render-size", f->render_params.size, "render width = height, pixels");
  app->add_option("--render-spp", f->render_params.samples_per_axis, "subpixel samples per axis");
  app->add_option("--function-out", f->function_out, "clear-sky scene irradiance function CSV");
  app->add_option("--doy", f->doy, "day of year for the scene function");
  cmd->run = [f] {
    if (f->scene.empty() == !f->random_canyon.has_value()) {
      fail(ErrorKind::config, "give exactly one of --scene and --random-canyon");
    }
    CanyonScene scene;
    PanelPlacement placement;
    if (f->random_canyon) {
      const auto rc = random_canyon(*f->random_canyon);
      scene = rc.scene;
      placement = rc.placement;
    } else {
      const auto file = load_scene(f->scene);
      if (!file.placement) fail(ErrorKind::config, f->scene + ": no panel_position/panel_normal");
      scene = file.scene;
      placement = *file.placement;
    }
    scene.validate();
    check_placement(scene, placement);
    if (!f->save_scene.empty()) save_scene(f->save_scene, scene, placement);

    std::optional<WeatherSeries> weather;
    if (!f->weather.empty()) weather = load_weather(f->weather);
    const bool needs_place = !f->out.empty() || !f->render.empty();
    if (needs_place && (!f->lat || !f->lon)) fail(ErrorKind::config, "--lat and --lon are required");

    if (!f->out.empty()) {
      if (!weather) fail(ErrorKind::config, "--out needs --weather");
      const auto points = oracle_series(scene, placement, *f->lat, *f->lon, *weather, f->oracle);
      save_forecast(f->out, points, "oracle");
      std::cout << line("total_kwh_m2", fmt(integrate_kwh(points)));
    }
    if (!f->render.empty()) {
      if (f->render_time.empty()) fail(ErrorKind::config, "--render needs --render-time");
      const GeoTime geo{*f->lat, *f->lon, parse_instant(f->render_time)};
      const auto sun = solar_position(geo);
      if (!sun.above_horizon()) fail(ErrorKind::domain, "the sun is below the horizon at --render-time");
      WeatherRecord rec;
      rec.instant = geo.instant;
      const auto cs = clear_sky_template(sun.zenith, day_of_year(geo.instant));
      rec.dni = cs.dni;
      rec.dhi = cs.dhi;
      if (weather) {
        if (auto near = record_near(*weather, geo.instant)) rec = *near;
      }
      const auto sky = build_sky(rec.dni, rec.dhi, sun, day_of_year(geo.instant), f->oracle.sky_grid_deg);
      RenderParams rp = f->render_params;
      rp.bounces = f->oracle.bounces;
      rp.seed = f->oracle.seed;
      auto result = render_hemisphere(scene, placement, sky, sun, rp);
      result.image.metadata.capture = geo;
      const std::string ext = std::filesystem::path(f->render).extension().string();
      if (ext == ".hdr") write_radiance_hdr(f->render, result.image);
      else write_pfm(f->render, result.image);
      write_metadata(metadata_path_for(f->render), result.image.metadata);
      if (!f->labels.empty()) write_pgm_mask(f->labels, result.sky_labels);
      if (!f->rotation_out.empty()) write_file_atomic(f->rotation_out, format_rotation(result.r_ec));
    }
    if (!f->function_out.empty()) {
      save_scene_function(f->function_out, oracle_predictor(scene, placement, f->oracle, f->doy));
    }
  };
  out.push_back(std::move(cmd));
}

// --- pca --------------------------------------------------------------------

void add_pca(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    std::vector<std::string> functions;
    int random_canyons = 0;
    OracleParams oracle;
    int doy = 80;
    std::string out;
  };
  auto f = std::make_shared<Flags>();
  f->oracle.samples = 1024;
  f->oracle.sky_grid_deg = 2.5;
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("pca", "Explained variance of scene irradiance functions");
  app->add_option("--functions", f->functions, "scene irradiance function CSVs");
  app->add_option("--random-canyons", f->random_canyons, "add this many oracle functions of random canyons");
  app->add_option("--seed", f->oracle.seed, "first canyon seed; also the path seed");
  app->add_option("--samples", f->oracle.samples, "oracle paths per function");
  app->add_option("--bounces", f->oracle.bounces, "Lambertian bounces");
  app->add_option("--grid-deg", f->oracle.sky_grid_deg, "sky normalization step, degrees");
  app->add_option("--doy", f->doy, "day of year of the clear-sky template");
  app->add_option("--out", f->out, "CSV of cumulative explained variance");
  cmd->run = [f] {
    std::vector<SceneIrradianceFunction> data;
    for (const auto& p : f->functions) data.push_back(load_scene_function(p));
    if (f->random_canyons < 0) fail(ErrorKind::config, "--random-canyons must be >= 0");
    for (int i = 0; i < f->random_canyons; ++i) {
      const auto rc = random_canyon(f->oracle.seed + static_cast<std::uint64_t>(i));
      data.push_back(oracle_predictor(rc.scene, rc.placement, f->oracle, f->doy));
    }
    const auto cum = pca_explained_variance(data);
    auto needed = [&](double share) {
      for (std::size_t k = 0; k < cum.size(); ++k)
        if (cum[k] >= share) return k + 1;
      return cum.size();
    };
    std::cout << line("functions", std::to_string(data.size()));
    std::cout << line("components_95", std::to_string(needed(0.95)));
    std::cout << line("components_98", std::to_string(needed(0.98)));
    if (!f->out.empty()) {
      std::string csv = "component,cumulative_explained_variance\n";
      for (std::size_t k = 0; k < cum.size(); ++k) csv += std::to_string(k + 1) + ',' + fmt(cum[k]) + '\n';
      write_file_atomic(f->out, csv);
    }
  };
  out.push_back(std::move(cmd));
}

// --- plot -------------------------------------------------------------------

void add_plot(CLI::App& root, std::vector<std::unique_ptr<Command>>& out) {
  struct Flags {
    std::vector<std::string> inputs, labels;
    std::string column = "e_total_wm2", out;
    ChartOptions chart;
  };
  auto f = std::make_shared<Flags>();
  auto cmd = std::make_unique<Command>();
  auto* app = cmd->app = root.add_subcommand("plot", "SVG line chart of forecast CSVs");
  app->add_option("--input", f->inputs, "forecast CSV (repeat to overlay)")->required();
  app->add_option("--label", f->labels, "legend label per input");
  app->add_option("--column", f->column, "e_sun_wm2, e_sky_wm2, e_scene_wm2 or e_total_wm2");
  app->add_option("--title", f->chart.title, "chart title");
  app->add_option("--width", f->chart.width, "pixels");
  app->add_option("--height", f->chart.height, "pixels");
  app->add_option("--out", f->out, "SVG to write")->required();
  cmd->run = [f] {
    if (!f->labels.empty() && f->labels.size() != f->inputs.size()) {
      fail(ErrorKind::config, "give one --label per --input");
    }
    std::vector<PlotSeries> series;
    for (std::size_t i = 0; i < f->inputs.size(); ++i) {
      const std::string label =
          f->labels.empty() ? std::filesystem::path(f->inputs[i]).stem().string() : f->labels[i];
      series.push_back(forecast_column(load_forecast(f->inputs[i]), f->column, label));
    }
    write_file_atomic(f->out, svg_line_chart(series, f->chart));
  };
  out.push_back(std::move(cmd));
}

}  // namespace

std::vector<std::unique_ptr<Command>> register_commands(CLI::App& root) {
  std::vector<std::unique_ptr<Command>> out;
  add_sun_position(root, out);
  add_orient(root, out);
  add_segment_sky(root, out);
  add_forecast(root, out);
  add_annual(root, out);
  add_best_orientation(root, out);
  add_baseline(root, out);
  add_simulate(root, out);
  add_pca(root, out);
  add_plot(root, out);
  for (auto& c : out) add_config_option(*c);
  return out;
}

}  // namespace panelcast::cli
