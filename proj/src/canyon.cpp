#include "panelcast/canyon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"
#include "panelcast/parallel.hpp"

namespace panelcast {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Orthonormal tangents for a unit normal (branchless construction).
void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2) {
  const double sign = std::copysign(1.0, n.z());
  const double a = -1.0 / (sign + n.z());
  const double b = n.x() * n.y() * a;
  t1 = Vec3(1.0 + sign * n.x() * n.x() * a, sign * b, -sign * n.x());
  t2 = Vec3(b, sign + n.y() * n.y() * a, -n.y());
}

Vec3 cosine_direction(const Vec3& n, double u1, double u2) {
  Vec3 t1, t2;
  tangent_frame(n, t1, t2);
  const double r = std::sqrt(u1);
  const double phi = kTwoPi * u2;
  return (r * std::cos(phi) * t1 + r * std::sin(phi) * t2 + std::sqrt(std::max(0.0, 1.0 - u1)) * n)
      .normalized();
}

// Slab test; returns entry/exit distances along the ray.
bool slab(const Box& box, const Vec3& o, const Vec3& d, double& t_near, double& t_far, int& axis) {
  t_near = -std::numeric_limits<double>::infinity();
  t_far = std::numeric_limits<double>::infinity();
  axis = -1;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return false;
      continue;
    }
    const double inv = 1.0 / d[a];
    double t0 = (box.min[a] - o[a]) * inv;
    double t1 = (box.max[a] - o[a]) * inv;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_near) {
      t_near = t0;
      axis = a;
    }
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return false;
  }
  return t_far > 0.0;
}

bool inside(const Box& b, const Vec3& p) {
  return (p.array() > b.min.array()).all() && (p.array() < b.max.array()).all();
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
  const auto f = split_whitespace(text);
  if (f.size() != 3) fail(ErrorKind::parse, what + " needs 3 numbers");
  return Vec3(parse_double(f[0], what), parse_double(f[1], what), parse_double(f[2], what));
}

std::string vec_text(const Vec3& v) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", v.x(), v.y(), v.z());
  return buf;
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ull + 1)));
}

void CanyonScene::validate() const {
  if (!(ground_albedo >= 0.0 && ground_albedo <= 1.0)) {
    fail(ErrorKind::config, "ground albedo must be in [0, 1]");
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    if (!(b.albedo >= 0.0 && b.albedo <= 1.0)) {
      fail(ErrorKind::config, "box " + std::to_string(i + 1) + ": albedo must be in [0, 1]");
    }
    if (!((b.max - b.min).array() > 0.0).all() || !b.min.allFinite() || !b.max.allFinite()) {
      fail(ErrorKind::config, "box " + std::to_string(i + 1) + ": extents must be positive");
    }
  }
}

double CanyonScene::extent() const {
  double e = 0.0;
  for (const auto& b : boxes) e = std::max({e, b.min.cwiseAbs().maxCoeff(), b.max.cwiseAbs().maxCoeff()});
  return e > 0.0 ? e : 1.0;
}

CanyonScene CanyonScene::scaled(double k) const {
  if (!(k > 0.0)) fail(ErrorKind::domain, "scale factor must be positive");
  CanyonScene s = *this;
  for (auto& b : s.boxes) {
    b.min *= k;
    b.max *= k;
  }
  return s;
}

void check_placement(const CanyonScene& scene, const PanelPlacement& placement) {
  if (!(placement.offset > 0.0)) fail(ErrorKind::geometry, "panel offset must be positive");
  if (scene.has_ground && placement.position.z() <= 0.0) {
    fail(ErrorKind::geometry, "panel position is below the ground plane");
  }
  for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
    if (inside(scene.boxes[i], placement.position)) {
      fail(ErrorKind::geometry, "panel position lies inside box " + std::to_string(i + 1));
    }
  }
}

std::optional<Hit> intersect(const CanyonScene& scene, const Vec3& origin, const Vec3& dir) {
  std::optional<Hit> best;
  double best_t = std::numeric_limits<double>::infinity();
  for (const auto& b : scene.boxes) {
    double tn, tf;
    int axis;
    if (!slab(b, origin, dir, tn, tf, axis) || tn <= 0.0 || tn >= best_t || axis < 0) continue;
    best_t = tn;
    Hit h;
    h.t = tn;
    h.point = origin + tn * dir;
    h.normal = Vec3::Zero();
    h.normal[axis] = dir[axis] > 0.0 ? -1.0 : 1.0;
    h.albedo = b.albedo;
    best = h;
  }
  if (scene.has_ground && dir.z() < 0.0 && origin.z() > 0.0) {
    const double t = -origin.z() / dir.z();
    if (t < best_t) {
      Hit h;
      h.t = t;
      h.point = origin + t * dir;
      h.point.z() = 0.0;
      h.normal = Vec3::UnitZ();
      h.albedo = scene.ground_albedo;
      best = h;
    }
  }
  return best;
}

bool unoccluded(const CanyonScene& scene, const Vec3& origin, const Vec3& dir) {
  if (scene.has_ground && dir.z() < 0.0) return false;
  for (const auto& b : scene.boxes) {
    double tn, tf;
    int axis;
    if (slab(b, origin, dir, tn, tf, axis)) return false;
  }
  return true;
}

SceneFile parse_scene(const std::string& text, const std::string& source_name) {
  SceneFile out;
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.01;
  bool have_position = false;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::parse, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "ground") {
        if (value == "none") {
          out.scene.has_ground = false;
        } else {
          out.scene.has_ground = true;
          out.scene.ground_albedo = parse_double(value, "ground albedo");
        }
      } else if (key == "box") {
        const auto f = split_whitespace(value);
        if (f.size() != 7) fail(ErrorKind::parse, "box needs x0 y0 z0 x1 y1 z1 albedo");
        Box b;
        for (int a = 0; a < 3; ++a) {
          const double lo = parse_double(f[static_cast<std::size_t>(a)], "box corner");
          const double hi = parse_double(f[static_cast<std::size_t>(a + 3)], "box corner");
          b.min[a] = std::min(lo, hi);
          b.max[a] = std::max(lo, hi);
        }
        b.albedo = parse_double(f[6], "box albedo");
        out.scene.boxes.push_back(b);
      } else if (key == "panel_position") {
        position = parse_vec3(value, "panel_position");
        have_position = true;
      } else if (key == "panel_normal") {
        normal = parse_vec3(value, "panel_normal");
      } else if (key == "panel_offset") {
        offset = parse_double(value, "panel_offset");
      } else {
        fail(ErrorKind::parse, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::parse) throw;
      fail(ErrorKind::parse, where + ": " + e.what());
    }
  }
  out.scene.validate();
  if (have_position) out.placement = PanelPlacement{position, Direction(normal), offset};
  return out;
}

std::string format_scene(const CanyonScene& scene, const std::optional<PanelPlacement>& placement) {
  std::string out = "# canyon scene: boxes are x0 y0 z0 x1 y1 z1 albedo (meters, x=East y=North z=Up)\n";
  if (scene.has_ground) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", scene.ground_albedo);
    out += std::string("ground = ") + buf + "\n";
  } else {
    out += "ground = none\n";
  }
  for (const auto& b : scene.boxes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", b.albedo);
    out += "box = " + vec_text(b.min) + " " + vec_text(b.max) + " " + buf + "\n";
  }
  if (placement) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", placement->offset);
    out += "panel_position = " + vec_text(placement->position) + "\n";
    out += "panel_normal = " + vec_text(placement->normal.vec()) + "\n";
    out += std::string("panel_offset = ") + buf + "\n";
  }
  return out;
}

SceneFile load_scene(const std::filesystem::path& path) {
  return parse_scene(read_file(path), path.string());
}

void save_scene(const std::filesystem::path& path, const CanyonScene& scene,
                const std::optional<PanelPlacement>& placement) {
  write_file_atomic(path, format_scene(scene, placement));
}

OracleTracer::OracleTracer(const CanyonScene& scene, const PanelPlacement& placement,
                           const OracleParams& params)
    : scene_(scene), placement_(placement), params_(params) {
  if (params.samples <= 0) fail(ErrorKind::config, "oracle sample budget must be positive");
  if (params.bounces < 0) fail(ErrorKind::config, "bounce count must be non-negative");
  scene_.validate();
  check_placement(scene_, placement_);
  eps_ = 1e-9 * std::max(scene_.extent(), placement_.position.cwiseAbs().maxCoeff());
  const Vec3 n = placement_.normal.vec();
  origin_ = placement_.position + eps_ * n;

  const int s = std::max(1, static_cast<int>(std::lround(std::sqrt(params.samples))));
  paths_.resize(static_cast<std::size_t>(s) * s);
  parallel_for(paths_.size(), [&](std::size_t k) {
    Rng rng = Rng::stream(params_.seed, k);
    const int i = static_cast<int>(k) / s;
    const int j = static_cast<int>(k) % s;
    const double u1 = (i + rng.uniform()) / s;
    const double u2 = (j + rng.uniform()) / s;
    Path& path = paths_[k];
    path.first_dir = cosine_direction(n, u1, u2);
    auto hit = intersect(scene_, origin_, path.first_dir);
    if (!hit) {
      path.first_sky = path.first_dir.z() > 0.0;
      return;
    }
    double throughput = 1.0;
    for (int bounce = 1; bounce <= params_.bounces && hit; ++bounce) {
      const Vec3 lifted = hit->point + eps_ * hit->normal;
      path.vertices.push_back({lifted, hit->normal, throughput * hit->albedo / kPi});
      throughput *= hit->albedo;
      if (throughput == 0.0) break;
      const Vec3 d = cosine_direction(hit->normal, rng.uniform(), rng.uniform());
      hit = intersect(scene_, lifted, d);
      if (!hit) {
        if (d.z() > 0.0) path.escapes.push_back({d, throughput});
        break;
      }
    }
  });
}

OracleIrradiance OracleTracer::evaluate(const SolarPosition& sun, double dni,
                                        const SkyRadianceModel* sky) const {
  OracleIrradiance r;
  const Vec3 s = sun.direction().vec();
  const bool sunlit = sun.above_horizon() && dni > 0.0;
  const Vec3 n = placement_.normal.vec();
  if (sunlit && n.dot(s) > 0.0 && unoccluded(scene_, origin_, s)) r.e_sun = dni * n.dot(s);

  const double count = static_cast<double>(paths_.size());
  double sky_sum = 0.0, sky_sq = 0.0, scene_sum = 0.0, scene_sq = 0.0;
  for (const auto& path : paths_) {
    double sky_c = 0.0;
    if (path.first_sky && sky) sky_c = sky->radiance(path.first_dir);
    double scene_c = 0.0;
    if (sunlit) {
      for (const auto& v : path.vertices) {
        const double c = v.normal.dot(s);
        if (c > 0.0 && v.weight > 0.0 && unoccluded(scene_, v.origin, s)) scene_c += v.weight * dni * c;
      }
    }
    if (sky) {
      for (const auto& e : path.escapes) scene_c += e.weight * sky->radiance(e.dir);
    }
    sky_sum += sky_c;
    sky_sq += sky_c * sky_c;
    scene_sum += scene_c;
    scene_sq += scene_c * scene_c;
  }
  const auto stderr_of = [&](double sum, double sq) {
    const double mean = sum / count;
    const double var = std::max(0.0, sq / count - mean * mean);
    return kPi * std::sqrt(var / count);
  };
  r.e_sky = kPi * sky_sum / count;
  r.e_scene = kPi * scene_sum / count;
  r.sky_stderr = stderr_of(sky_sum, sky_sq);
  r.scene_stderr = stderr_of(scene_sum, scene_sq);
  return r;
}

OracleIrradiance panel_irradiance_oracle(const CanyonScene& scene, const PanelPlacement& placement,
                                         const SkyRadianceModel& sky, const SolarPosition& sun,
                                         const OracleParams& params) {
  return OracleTracer(scene, placement, params).evaluate(sun, sky.dni(), &sky);
}

std::vector<ForecastPoint> oracle_series(const CanyonScene& scene, const PanelPlacement& placement,
                                         double latitude_deg, double longitude_deg,
                                         const WeatherSeries& weather, const OracleParams& params) {
  weather.check_monotone();
  const OracleTracer tracer(scene, placement, params);
  std::vector<ForecastPoint> out(weather.records.size());
  parallel_for(weather.records.size(), [&](std::size_t i) {
    const auto& rec = weather.records[i];
    const auto sun = solar_position({latitude_deg, longitude_deg, rec.instant});
    if (!sun.above_horizon()) {
      out[i] = ForecastPoint::make(rec.instant, 0.0, 0.0, 0.0);
      return;
    }
    std::optional<SkyRadianceModel> sky;
    if (rec.dhi > 0.0) sky = build_sky(rec.dni, rec.dhi, sun, day_of_year(rec.instant), params.sky_grid_deg);
    const auto r = tracer.evaluate(sun, rec.dni, sky ? &*sky : nullptr);
    out[i] = ForecastPoint::make(rec.instant, r.e_sun, r.e_sky, r.e_scene);
  });
  return out;
}

SceneIrradianceFunction oracle_predictor(const CanyonScene& scene, const PanelPlacement& placement,
                                         const OracleParams& params, int day_of_year) {
  const OracleTracer tracer(scene, placement, params);
  SceneIrradianceFunction f;
  parallel_for(SceneIrradianceFunction::kRows, [&](std::size_t row) {
    const int r = static_cast<int>(row);
    const double zenith = SceneIrradianceFunction::row_zenith(r);
    const auto cs = clear_sky_template(zenith, day_of_year);
    const auto base = build_sky(cs.dni, cs.dhi, {zenith, 0.0}, day_of_year, params.sky_grid_deg);
    for (int c = 0; c < SceneIrradianceFunction::kCols; ++c) {
      const double az = SceneIrradianceFunction::col_azimuth(c);
      const auto sky = base.with_sun_azimuth(az);
      f.at(r, c) = tracer.evaluate(sky.sun(), cs.dni, &sky).e_scene;
    }
  });
  return f;
}

double check_scale_invariance(const CanyonScene& scene, const PanelPlacement& placement,
                              const SkyRadianceModel& sky, const SolarPosition& sun, double k,
                              const OracleParams& params) {
  if (!(k > 0.0)) fail(ErrorKind::domain, "scale factor must be positive");
  const double base = OracleTracer(scene, placement, params).evaluate(sun, sky.dni(), &sky).e_scene;
  const double scaled =
      OracleTracer(scene.scaled(k), placement.scaled(k), params).evaluate(sun, sky.dni(), &sky).e_scene;
  const double diff = std::abs(scaled - base);
  return base > 0.0 ? diff / base : diff;
}

BoundaryEstimate check_boundary_term(const CanyonScene& scene, const PanelPlacement& placement,
                                     const SolarPosition& sun, double band_width,
                                     const BoundaryParams& params) {
  if (params.samples_per_axis <= 0 || params.ring_points <= 0) {
    fail(ErrorKind::config, "boundary sampling needs positive sample counts");
  }
  scene.validate();
  check_placement(scene, placement);
  if (!(band_width > 0.0)) fail(ErrorKind::domain, "band width must be positive");
  if (!sun.above_horizon()) return {};
  const double eps = 1e-9 * std::max(scene.extent(), placement.position.cwiseAbs().maxCoeff());
  const Vec3 n = placement.normal.vec();
  const Vec3 origin = placement.position + eps * n;
  const Vec3 s = sun.direction().vec();
  const int S = params.samples_per_axis;
  const std::size_t total_samples = static_cast<std::size_t>(S) * S;
  std::vector<double> lit(total_samples, 0.0), band(total_samples, 0.0);
  parallel_for(total_samples, [&](std::size_t k) {
    Rng rng = Rng::stream(params.seed, k);
    const int i = static_cast<int>(k) / S;
    const int j = static_cast<int>(k) % S;
    const double u1 = (i + rng.uniform()) / S;
    const double u2 = (j + rng.uniform()) / S;
    const auto hit = intersect(scene, origin, cosine_direction(n, u1, u2));
    if (!hit) return;
    const Vec3 p = hit->point + eps * hit->normal;
    const double cosine = hit->normal.dot(s);
    const bool visible = cosine > 0.0 && unoccluded(scene, p, s);
    const double c = visible ? hit->albedo / kPi * cosine : 0.0;
    lit[k] = c;
    if (c == 0.0) return;
    Vec3 t1, t2;
    tangent_frame(hit->normal, t1, t2);
    for (int m = 0; m < params.ring_points; ++m) {
      const double a = kTwoPi * m / params.ring_points;
      const Vec3 q = p + band_width * (std::cos(a) * t1 + std::sin(a) * t2);
      if (!unoccluded(scene, q, s)) {
        band[k] = c;
        return;
      }
    }
  });
  BoundaryEstimate out;
  double lit_sum = 0.0, band_sum = 0.0;
  for (std::size_t k = 0; k < total_samples; ++k) {
    lit_sum += lit[k];
    band_sum += band[k];
    if (lit[k] > 0.0) ++out.lit_samples;
    if (band[k] > 0.0) ++out.band_samples;
  }
  if (lit_sum > 0.0) out.fraction = band_sum / lit_sum;
  return out;
}

namespace {

struct Shader {
  const CanyonScene& scene;
  const SkyRadianceModel& sky;
  Vec3 sun;
  double dni;
  bool sunlit;
  int bounces;
  double eps;

  double sky_radiance(const Vec3& d) const { return d.z() > 0.0 ? sky.radiance(d) : 0.0; }

  // Outgoing radiance of a Lambertian hit point, one sampled path deep.
  double shade(const Hit& hit, int depth, Rng& rng) const {
    const Vec3 p = hit.point + eps * hit.normal;
    double direct = 0.0;
    const double c = hit.normal.dot(sun);
    if (sunlit && c > 0.0 && unoccluded(scene, p, sun)) direct = dni * c;
    double out = hit.albedo / kPi * direct;
    if (hit.albedo == 0.0) return out;
    const Vec3 d = cosine_direction(hit.normal, rng.uniform(), rng.uniform());
    const auto next = intersect(scene, p, d);
    if (!next) return out + hit.albedo * sky_radiance(d);
    if (depth < bounces) out += hit.albedo * shade(*next, depth + 1, rng);
    return out;
  }
};

}  // namespace

RenderResult render_hemisphere(const CanyonScene& scene, const PanelPlacement& placement,
                               const SkyRadianceModel& sky, const SolarPosition& sun,
                               const RenderParams& params) {
  if (params.size <= 0 || params.samples_per_axis <= 0) {
    fail(ErrorKind::config, "render sample budget must be positive");
  }
  scene.validate();
  check_placement(scene, placement);
  const int w = params.size;
  const auto proj = ProjectionModel::fisheye(kPi);
  RenderResult out;
  out.r_ec = Rotation::with_optical_axis(placement.normal);
  out.image = HdrImage(w, w);
  out.sky_labels = Mask(w, w);
  out.image.metadata.gravity = out.r_ec.matrix().transpose() * Vec3(0.0, 0.0, -1.0);

  const double eps = 1e-9 * std::max(scene.extent(), placement.position.cwiseAbs().maxCoeff());
  const Vec3 origin = placement.position + eps * placement.normal.vec();
  const Vec3 s = sun.direction().vec();
  const double sun_radius = deg2rad(params.sun_diameter_deg / 2.0);
  const double cos_sun = std::cos(sun_radius);
  const double sun_solid_angle = kTwoPi * (1.0 - cos_sun);
  const bool sunlit = sun.above_horizon() && sky.dni() > 0.0;
  const Shader shader{scene, sky, s, sky.dni(), sunlit, params.bounces, eps};
  const Mat3 to_earth = out.r_ec.matrix();
  const int S = params.samples_per_axis;

  parallel_for(static_cast<std::size_t>(w) * w, [&](std::size_t idx) {
    const int x = static_cast<int>(idx) % w;
    const int y = static_cast<int>(idx) / w;
    const auto center = proj.unproject({x + 0.5, y + 0.5}, w, w);
    if (!center) return;
    {
      const Vec3 d = to_earth * *center;
      out.sky_labels.at(x, y) = (d.z() > 0.0 && !intersect(scene, origin, d)) ? 1 : 0;
    }
    Rng rng = Rng::stream(params.seed, idx);
    Vec3 rgb = Vec3::Zero();
    int valid = 0;
    for (int a = 0; a < S; ++a) {
      for (int b = 0; b < S; ++b) {
        const double u = x + (a + rng.uniform()) / S;
        const double v = y + (b + rng.uniform()) / S;
        const auto dc = proj.unproject({u, v}, w, w);
        if (!dc) continue;
        ++valid;
        const Vec3 d = to_earth * *dc;
        const auto hit = intersect(scene, origin, d);
        if (hit) {
          rgb += Vec3::Constant(shader.shade(*hit, 1, rng));
        } else if (d.z() > 0.0) {
          rgb += sky.radiance(d) * params.sky_tint;
          if (sunlit && d.dot(s) >= cos_sun) rgb += Vec3::Constant(sky.dni() / sun_solid_angle);
        }
      }
    }
    if (valid > 0) rgb /= valid;
    out.image.set(x, y, static_cast<float>(rgb.x()), static_cast<float>(rgb.y()),
                  static_cast<float>(rgb.z()));
  });
  return out;
}

RandomCanyon random_canyon(std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0xCA17);
  const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const double street = uni(6.0, 20.0);
  const bool east_west = rng.uniform() < 0.5;
  RandomCanyon out;
  out.scene.ground_albedo = 0.2;

  // Street runs along y in local coordinates; buildings flank it in x.
  struct Building {
    Box box;
    int side;
  };
  std::vector<Building> buildings;
  for (const int side : {-1, 1}) {
    const double depth = uni(8.0, 18.0);
    double y = -60.0;
    while (y < 60.0) {
      const double len = uni(10.0, 30.0);
      Box b;
      const double inner = side * street / 2.0;
      const double outer = side * (street / 2.0 + depth);
      b.min = Vec3(std::min(inner, outer), y, 0.0);
      b.max = Vec3(std::max(inner, outer), std::min(y + len, 60.0), uni(6.0, 45.0));
      b.albedo = uni(0.2, 0.4);
      buildings.push_back({b, side});
      y += len;
      if (rng.uniform() < 0.3) y += uni(3.0, 8.0);
    }
  }
  for (const auto& bd : buildings) {
    out.scene.boxes.push_back(bd.box);
    if (rng.uniform() < 0.4) {
      // Parapet along the street-facing roof edge.
      Box p;
      const double edge = bd.side < 0 ? bd.box.max.x() : bd.box.min.x();
      const double inward = bd.side < 0 ? -0.3 : 0.3;
      p.min = Vec3(std::min(edge, edge + inward), bd.box.min.y(), bd.box.max.z());
      p.max = Vec3(std::max(edge, edge + inward), bd.box.max.y(), bd.box.max.z() + uni(0.5, 1.2));
      p.albedo = bd.box.albedo;
      out.scene.boxes.push_back(p);
    }
  }

  const double offset = 0.05;
  const double kind = rng.uniform();
  const double tilt = deg2rad(uni(0.0, 30.0));
  const double azimuth = uni(0.0, kTwoPi);
  PanelPlacement pl;
  pl.offset = offset;
  if (kind < 1.0 / 3.0) {
    out.site = PanelSite::ground;
    pl.position = Vec3(uni(-street / 2.0 + 1.0, street / 2.0 - 1.0), uni(-15.0, 15.0), offset);
    pl.normal = Direction::from_angles(tilt, azimuth);
  } else {
    // Pick a building near the middle of the street.
    std::vector<const Building*> middle;
    for (const auto& bd : buildings)
      if (bd.box.min.y() < 10.0 && bd.box.max.y() > -10.0) middle.push_back(&bd);
    const Building& bd = *middle[static_cast<std::size_t>(rng.uniform() * middle.size()) % middle.size()];
    const double y = uni(std::max(bd.box.min.y(), -15.0) + 1.0, std::min(bd.box.max.y(), 15.0) - 1.0);
    if (kind < 2.0 / 3.0) {
      out.site = PanelSite::wall;
      const double face = bd.side < 0 ? bd.box.max.x() : bd.box.min.x();
      const double outward = bd.side < 0 ? 1.0 : -1.0;
      pl.position = Vec3(face + outward * offset, y, uni(1.0, bd.box.max.z() - 1.0));
      const double wall_tilt = deg2rad(uni(60.0, 90.0));
      pl.normal = Direction(std::sin(wall_tilt) * outward, 0.0, std::cos(wall_tilt));
    } else {
      out.site = PanelSite::rooftop;
      const double cx = 0.5 * (bd.box.min.x() + bd.box.max.x());
      pl.position = Vec3(cx + uni(-2.0, 2.0), y, bd.box.max.z() + offset);
      pl.normal = Direction::from_angles(tilt, azimuth);
    }
  }
  out.placement = pl;

  if (east_west) {
    const auto swap_xy = [](Vec3 v) { return Vec3(v.y(), v.x(), v.z()); };
    for (auto& b : out.scene.boxes) {
      b.min = swap_xy(b.min);
      b.max = swap_xy(b.max);
    }
    out.placement.position = swap_xy(out.placement.position);
    out.placement.normal = Direction(swap_xy(out.placement.normal.vec()));
  }
  check_placement(out.scene, out.placement);
  return out;
}

}  // namespace panelcast
