#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "panelcast/error.hpp"
#include "panelcast/geom.hpp"

namespace testing {

/// Asserts that `expr` throws panelcast::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected_kind)                          \
  do {                                                                 \
    bool thrown_ = false;                                              \
    try {                                                              \
      (void)(expr);                                                    \
    } catch (const panelcast::Error& e_) {                             \
      thrown_ = true;                                                  \
      CHECK_MESSAGE(e_.kind() == (expected_kind), e_.what());          \
    }                                                                  \
    CHECK_MESSAGE(thrown_, "expected an error from: " #expr);          \
  } while (0)

inline panelcast::Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return panelcast::Rotation(q.toRotationMatrix());
}

inline panelcast::Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return panelcast::Direction(n(rng), n(rng), n(rng));
}

/// Direction at `angle` radians from `d`, in a uniformly random plane.
inline panelcast::Direction perturb(const panelcast::Direction& d, double angle,
                                    std::mt19937_64& rng) {
  const panelcast::Vec3 v = d.vec();
  panelcast::Vec3 t = random_direction(rng).vec();
  t = (t - t.dot(v) * v).normalized();
  return panelcast::Direction(std::cos(angle) * v + std::sin(angle) * t);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("panelcast_" + name + "_" + std::to_string(stamp));
  std::filesystem::create_directories(dir);
  return dir;
}

inline double deg(double rad) { return panelcast::rad2deg(rad); }

}  // namespace testing
