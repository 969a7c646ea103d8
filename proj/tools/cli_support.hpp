#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "panelcast/aperture.hpp"
#include "panelcast/ephemeris.hpp"
#include "panelcast/image.hpp"
#include "panelcast/irradiance.hpp"
#include "panelcast/weather.hpp"

namespace panelcast::cli {

/// Registered subcommand: its CLI11 app, the config path it was given and
/// the action to run after parsing.
struct Command {
  CLI::App* app = nullptr;
  std::string config;
  std::function<void()> run;
};

/// Adds `--config` to `command`.
void add_config_option(Command& command);

/// argv entries for the keys of a `key = value` config file whose flags do
/// not appear in `given` (flags win). config_error for keys that name no
/// option.
std::vector<std::string> config_arguments(const CLI::App& command, const std::string& path,
                                          const std::vector<std::string>& given);

/// Value of `--config` in raw arguments, or empty.
std::string find_config(const std::vector<std::string>& args);

/// Capture-related flags shared by forecast, annual, baseline, segment-sky,
/// orient and best-orientation.
struct CaptureFlags {
  std::string image;
  std::string mask;
  std::string rotation;
  std::string projection = "fisheye";
  double fov_deg = 180.0;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::string capture_time;
  double sun_ratio = 50.0;
  SegmentationParams segmentation;
};

void add_image_flags(CLI::App& app, CaptureFlags& flags, bool with_mask);
void add_location_flags(CLI::App& app, CaptureFlags& flags);
void add_rotation_flags(CLI::App& app, CaptureFlags& flags);
void add_segmentation_flags(CLI::App& app, CaptureFlags& flags);

ProjectionModel projection_from(const CaptureFlags& flags);

struct Capture {
  HdrImage image;
  ProjectionModel projection;
  std::optional<GeoTime> geo;  // capture place and time, flags over metadata
};

Capture load_capture(const CaptureFlags& flags);

/// External mask when given, else heuristic segmentation.
SkyAperture capture_aperture(const Capture& capture, const CaptureFlags& flags);

/// Rotation file when given, else sun detection plus gravity and ephemeris.
Rotation capture_rotation(const Capture& capture, const CaptureFlags& flags);

/// Latitude/longitude from flags, else from the capture metadata.
std::pair<double, double> site_location(const CaptureFlags& flags, const Capture* capture);

/// Panel normal from --normal, else --tilt-deg/--azimuth-deg, else the
/// optical axis of the capture.
struct PanelFlags {
  std::string normal;
  std::optional<double> tilt_deg;
  std::optional<double> azimuth_deg;
};
void add_panel_flags(CLI::App& app, PanelFlags& flags);
PanelPose resolve_panel(const PanelFlags& flags, const std::optional<Rotation>& r_ec);

/// Weather record nearest `t` within one nominal step, if any.
std::optional<WeatherRecord> record_near(const WeatherSeries& weather, Instant t);

/// Prints to stdout and, when `path` is set, writes atomically.
void emit(const std::string& text, const std::string& path);

}  // namespace panelcast::cli
