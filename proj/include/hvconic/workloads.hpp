#pragma once

#include <cstdint>
#include <vector>

#include "hvconic/grid_geometry.hpp"
#include "hvconic/metrics.hpp"

namespace hvconic {

/// Random simple chain. Closed chains are star-shaped polygons around the
/// origin with radii in [0.5, 1]; open chains are strictly x-monotone. Every
/// edge is at least min_edge long.
Polyline random_simple_polyline(std::uint64_t seed, bool closed, int vertices, double min_edge);

/// Resolutions 2x2, 4x4, ... up to the geometry's own dims by repeated
/// halving while both counts stay even.
std::vector<GridGeometry> halving_resolutions(const GridGeometry& geometry);

}  // namespace hvconic
