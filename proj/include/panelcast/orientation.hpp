#pragma once

#include <utility>
#include <vector>

#include "panelcast/geom.hpp"

namespace panelcast {

/// (camera-frame direction, Earth-frame direction)
using DirectionPair = std::pair<Direction, Direction>;

/// Least-squares rotation R (camera -> Earth) minimizing
/// sum |R v_cam - v_earth|^2 over the pairs, via SVD with the proper-rotation
/// sign fix. Needs at least two pairs whose camera directions are not all
/// parallel; throws geometry_error otherwise.
Rotation kabsch(const std::vector<DirectionPair>& pairs);

/// Camera -> Earth rotation that maps gravity exactly and resolves the
/// remaining azimuth about the vertical with the sun pair, in closed form.
/// Throws geometry_error when the sun is parallel to gravity.
Rotation azimuth_align(const Direction& gravity_cam, const Direction& gravity_earth,
                       const Direction& sun_cam, const Direction& sun_earth);

}  // namespace panelcast
