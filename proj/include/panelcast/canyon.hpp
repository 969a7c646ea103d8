#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "panelcast/image.hpp"
#include "panelcast/irradiance.hpp"
#include "panelcast/scene_function.hpp"
#include "panelcast/sky_model.hpp"

namespace panelcast {

/// Seeded stream of uniform doubles in [0, 1). Streams for (seed, index)
/// pairs are independent of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng stream(std::uint64_t seed, std::uint64_t index);
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
  double albedo = 0.3;
};

/// Axis-aligned Lambertian boxes over an optional infinite ground plane z=0.
struct CanyonScene {
  std::vector<Box> boxes;
  bool has_ground = true;
  double ground_albedo = 0.2;

  /// config_error for albedos outside [0, 1] or non-positive extents.
  void validate() const;
  /// Largest coordinate magnitude of the geometry (1 for an empty scene);
  /// ray offsets are relative to it.
  double extent() const;
  CanyonScene scaled(double k) const;
};

struct PanelPlacement {
  Vec3 position = Vec3::Zero();
  Direction normal;
  double offset = 0.01;  // meters from the supporting surface

  PanelPlacement scaled(double k) const { return {k * position, normal, k * offset}; }
};

/// geometry_error when the panel sits inside a box or below the ground.
void check_placement(const CanyonScene& scene, const PanelPlacement& placement);

struct Hit {
  double t = 0.0;
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  double albedo = 0.0;
};

std::optional<Hit> intersect(const CanyonScene& scene, const Vec3& origin, const Vec3& dir);
/// True when nothing blocks the ray from `origin` towards `dir`.
bool unoccluded(const CanyonScene& scene, const Vec3& origin, const Vec3& dir);

/// Scene file: `#` comments and lines
///   ground = <albedo> | none
///   box = x0 y0 z0 x1 y1 z1 albedo
///   panel_position = x y z
///   panel_normal = x y z
///   panel_offset = <meters>
struct SceneFile {
  CanyonScene scene;
  std::optional<PanelPlacement> placement;
};
SceneFile parse_scene(const std::string& text, const std::string& source_name = "scene");
std::string format_scene(const CanyonScene& scene, const std::optional<PanelPlacement>& placement);
SceneFile load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const CanyonScene& scene,
                const std::optional<PanelPlacement>& placement);

struct OracleParams {
  int samples = 4096;  // cosine-weighted paths from the panel (rounded to a square)
  int bounces = 2;     // Lambertian reflections carried to the panel
  std::uint64_t seed = 1;
  double sky_grid_deg = 1.0;  // sky normalization grid
};

struct OracleIrradiance {
  double e_sun = 0.0;
  double e_sky = 0.0;
  double e_scene = 0.0;
  double sky_stderr = 0.0;
  double scene_stderr = 0.0;
  double total() const { return e_sun + e_sky + e_scene; }
};

/// Sun-independent path set from the panel. Evaluating it for a sun
/// position only adds shadow rays, so one tracer serves a whole day or all
/// 5184 sun bins with correlated (smooth) noise.
class OracleTracer {
 public:
  OracleTracer(const CanyonScene& scene, const PanelPlacement& placement,
               const OracleParams& params);

  /// `sky` may be null (no diffuse light); its sun position is ignored in
  /// favor of `sun`.
  OracleIrradiance evaluate(const SolarPosition& sun, double dni,
                            const SkyRadianceModel* sky) const;

  const CanyonScene& scene() const { return scene_; }
  const PanelPlacement& placement() const { return placement_; }
  std::size_t path_count() const { return paths_.size(); }

 private:
  struct Vertex {
    Vec3 origin;  // hit point lifted along the normal
    Vec3 normal;
    double weight;  // throughput * albedo / pi
  };
  struct Escape {
    Vec3 dir;
    double weight;  // throughput including this vertex's albedo
  };
  struct Path {
    Vec3 first_dir;
    bool first_sky = false;
    std::vector<Vertex> vertices;
    std::vector<Escape> escapes;
  };

  CanyonScene scene_;
  PanelPlacement placement_;
  OracleParams params_;
  Vec3 origin_;
  double eps_;
  std::vector<Path> paths_;
};

OracleIrradiance panel_irradiance_oracle(const CanyonScene& scene, const PanelPlacement& placement,
                                         const SkyRadianceModel& sky, const SolarPosition& sun,
                                         const OracleParams& params = {});

/// Oracle irradiance for every weather record, with sun and sky from the
/// weather and ephemeris. Components map directly onto the forecast schema.
std::vector<ForecastPoint> oracle_series(const CanyonScene& scene, const PanelPlacement& placement,
                                         double latitude_deg, double longitude_deg,
                                         const WeatherSeries& weather,
                                         const OracleParams& params = {});

/// Clear-sky scene irradiance per sun bin from the template sky on
/// `day_of_year`. geometry_error for an unreachable placement.
SceneIrradianceFunction oracle_predictor(const CanyonScene& scene, const PanelPlacement& placement,
                                         const OracleParams& params = {}, int day_of_year = 80);

/// |e_scene(k scene) - e_scene(scene)| / e_scene(scene) with paired seeds;
/// the absolute difference when e_scene(scene) is 0.
double check_scale_invariance(const CanyonScene& scene, const PanelPlacement& placement,
                              const SkyRadianceModel& sky, const SolarPosition& sun, double k,
                              const OracleParams& params = {});

struct BoundaryParams {
  int samples_per_axis = 256;  // stratified first-hit directions
  int ring_points = 32;        // in-plane probes around each hit
  std::uint64_t seed = 1;
};

struct BoundaryEstimate {
  /// Share of the first-bounce sunlit scene irradiance from the band; 0 when
  /// nothing sunlit is visible.
  double fraction = 0.0;
  std::size_t lit_samples = 0;
  std::size_t band_samples = 0;
};

/// Points within `band_width` (meters) of a shadow boundary form the band:
/// sun visibility differs somewhere on a ring of that radius in the surface
/// plane.
BoundaryEstimate check_boundary_term(const CanyonScene& scene, const PanelPlacement& placement,
                           const SolarPosition& sun, double band_width,
                           const BoundaryParams& params = {});

struct RenderParams {
  int size = 256;             // fisheye width = height
  int samples_per_axis = 3;   // stratified subpixel samples
  int bounces = 2;
  std::uint64_t seed = 1;
  /// Primary rays that reach the sky are tinted; geometry stays grey.
  Vec3 sky_tint = Vec3(0.8, 0.95, 1.25);
  double sun_diameter_deg = 0.53;
};

struct RenderResult {
  HdrImage image;
  Mask sky_labels;  // 1 where the pixel-center ray reaches the sky
  Rotation r_ec;    // camera -> Earth
};

/// Equidistant 180-degree fisheye looking along the panel normal, image top
/// towards North for an upward normal. Gravity is stored in the metadata.
RenderResult render_hemisphere(const CanyonScene& scene, const PanelPlacement& placement,
                               const SkyRadianceModel& sky, const SolarPosition& sun,
                               const RenderParams& params = {});

enum class PanelSite { ground, wall, rooftop };

/// Random street canyon: two rows of buildings along a street, optional
/// roof parapets, and a panel near the ground, on a wall, or on a roof.
struct RandomCanyon {
  CanyonScene scene;
  PanelPlacement placement;
  PanelSite site = PanelSite::ground;
};
RandomCanyon random_canyon(std::uint64_t seed);

}  // namespace panelcast
