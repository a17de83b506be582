#include "hvconic/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvconic/random.hpp"

namespace hvconic {

Polyline random_simple_polyline(std::uint64_t seed, bool closed, int vertices, double min_edge) {
  if (vertices < (closed ? 3 : 2)) throw Error(ErrorCode::InvalidParameter, "too few vertices");
  if (!(min_edge >= 0.0)) throw Error(ErrorCode::InvalidParameter, "min_edge must be >= 0");
  Rng rng(seed);
  std::vector<Point> pts(static_cast<std::size_t>(vertices));
  if (!closed) {
    double x = 0.0;
    for (auto& p : pts) {
      p = {x, rng.uniform(-1.0, 1.0)};
      x += std::max(min_edge, 1e-3) + rng.uniform(0.0, 0.5);
    }
    return Polyline(std::move(pts), false);
  }
  // Star-shaped polygon; redraw until every edge is long enough.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> angles(pts.size());
    for (auto& a : angles) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    bool distinct = true;
    for (std::size_t k = 1; k < angles.size(); ++k) distinct = distinct && angles[k] > angles[k - 1];
    // The origin must stay inside, so no angular gap may reach pi.
    double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
    for (std::size_t k = 1; k < angles.size(); ++k) gap = std::max(gap, angles[k] - angles[k - 1]);
    if (!distinct || gap >= std::numbers::pi) continue;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double r = rng.uniform(0.5, 1.0);
      pts[k] = {r * std::cos(angles[k]), r * std::sin(angles[k])};
    }
    bool long_enough = true;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Point& a = pts[k];
      const Point& b = pts[(k + 1) % pts.size()];
      long_enough = long_enough && std::hypot(b.x - a.x, b.y - a.y) >= min_edge;
    }
    if (!long_enough) continue;
    Polyline chain(pts, true);
    if (chain.is_simple()) return chain;
  }
  throw Error(ErrorCode::InvalidParameter, "could not draw a closed chain with these edge lengths");
}

std::vector<GridGeometry> halving_resolutions(const GridGeometry& geometry) {
  std::vector<GridGeometry> out{geometry};
  int m = geometry.m(), n = geometry.n();
  while (m % 2 == 0 && n % 2 == 0 && m > 2 && n > 2) {
    m /= 2;
    n /= 2;
    out.emplace_back(geometry.box(), m, n);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace hvconic
