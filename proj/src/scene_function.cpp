#include "panelcast/scene_function.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"

namespace panelcast {

SceneIrradianceFunction::SceneIrradianceFunction(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(kSize)) {
    fail(ErrorKind::format, "scene irradiance function needs 36 x 144 values, got " +
                                std::to_string(values_.size()));
  }
  for (const double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::format, "scene irradiance values must be finite and non-negative");
    }
  }
}

double SceneIrradianceFunction::interpolate(const SolarPosition& sun) const {
  if (!sun.above_horizon()) return 0.0;
  const double t = std::clamp(rad2deg(sun.zenith) / kBinDeg - 0.5, 0.0, kRows - 1.0);
  const int r0 = std::min(static_cast<int>(std::floor(t)), kRows - 2);
  const double fr = t - r0;
  const double s = rad2deg(wrap_two_pi(sun.azimuth)) / kBinDeg - 0.5;
  const double sf = std::floor(s);
  const double fc = s - sf;
  const int c0 = ((static_cast<int>(sf) % kCols) + kCols) % kCols;
  const int c1 = (c0 + 1) % kCols;
  const double top = (1.0 - fc) * at(r0, c0) + fc * at(r0, c1);
  const double bottom = (1.0 - fc) * at(r0 + 1, c0) + fc * at(r0 + 1, c1);
  return (1.0 - fr) * top + fr * bottom;
}

std::string format_scene_function(const SceneIrradianceFunction& f) {
  std::string out =
      "# scene irradiance W/m^2; rows: sun zenith bins [0,90) deg step 2.5 (centers 1.25..88.75); "
      "cols: sun azimuth bins [0,360) deg step 2.5 clockwise from North (centers 1.25..358.75)\n";
  char buf[32];
  for (int r = 0; r < SceneIrradianceFunction::kRows; ++r) {
    for (int c = 0; c < SceneIrradianceFunction::kCols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g", f.at(r, c));
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

SceneIrradianceFunction parse_scene_function(const std::string& text,
                                             const std::string& source_name) {
  std::vector<double> values;
  values.reserve(SceneIrradianceFunction::kSize);
  int line_no = 0;
  int rows = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() != SceneIrradianceFunction::kCols) {
      fail(ErrorKind::parse, source_name + ":" + std::to_string(line_no) + ": expected 144 values");
    }
    for (const auto& f : fields) values.push_back(parse_double(f, "scene irradiance"));
    ++rows;
  }
  if (rows != SceneIrradianceFunction::kRows) {
    fail(ErrorKind::parse, source_name + ": expected 36 rows, got " + std::to_string(rows));
  }
  return SceneIrradianceFunction(std::move(values));
}

void save_scene_function(const std::filesystem::path& path, const SceneIrradianceFunction& f) {
  write_file_atomic(path, format_scene_function(f));
}

SceneIrradianceFunction load_scene_function(const std::filesystem::path& path) {
  return parse_scene_function(read_file(path), path.string());
}

SceneIrradianceFunction analytic_canyon_predictor(const SkyAperture& aperture,
                                                  const Rotation& r_ec, const Direction& normal,
                                                  double albedo,
                                                  const std::optional<CaptureWeather>& capture,
                                                  double grid_step_deg) {
  if (!(albedo >= 0.0 && albedo <= 1.0)) fail(ErrorKind::domain, "albedo must be in [0, 1]");
  const Direction normal_cam = r_ec.inverse().apply(normal);
  const double f_scene = std::max(0.0, 1.0 - sky_view_factor(aperture, normal_cam, grid_step_deg));

  int doy = 80;
  double scale = 1.0;
  if (capture) {
    doy = day_of_year(capture->record.instant);
    const auto cs = clear_sky_template(capture->sun.zenith, doy);
    if (capture->record.ghi_clear && cs.ghi > 0.0) scale = *capture->record.ghi_clear / cs.ghi;
  }
  SceneIrradianceFunction f;
  for (int r = 0; r < SceneIrradianceFunction::kRows; ++r) {
    const auto cs = clear_sky_template(SceneIrradianceFunction::row_zenith(r), doy);
    const double value = albedo * scale * cs.ghi * f_scene;
    for (int c = 0; c < SceneIrradianceFunction::kCols; ++c) f.at(r, c) = value;
  }
  return f;
}

std::vector<double> pca_explained_variance(const std::vector<SceneIrradianceFunction>& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  if (n < 2) fail(ErrorKind::domain, "PCA needs at least two scene irradiance functions");
  Eigen::MatrixXd x(n, SceneIrradianceFunction::kSize);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = dataset[static_cast<std::size_t>(i)].values();
    x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), SceneIrradianceFunction::kSize);
  }
  x.rowwise() -= x.colwise().mean();
  // Sample-space Gram matrix shares its non-zero spectrum with the covariance.
  const Eigen::MatrixXd gram = x * x.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  Eigen::VectorXd values = eig.eigenvalues().reverse().cwiseMax(0.0);
  const double total = values.sum();
  std::vector<double> cumulative(static_cast<std::size_t>(n), 1.0);
  if (!(total > 0.0)) return cumulative;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += values(i);
    cumulative[static_cast<std::size_t>(i)] = std::min(1.0, acc / total);
  }
  // Keep the sequence monotone against rounding in the last components.
  for (std::size_t i = 1; i < cumulative.size(); ++i)
    cumulative[i] = std::max(cumulative[i], cumulative[i - 1]);
  return cumulative;
}

}  // namespace panelcast
