#pragma once

#include <cstddef>
#include <vector>

#include "hvconic/grid_geometry.hpp"

namespace hvconic {

/// p-norm distance; p = 1 is the taxicab metric, p = 2 the Euclidean one.
double dist_p(Point u, Point v, double p);

/// Certified two-sided enclosure of a quantity. Never use the midpoint as
/// if it were exact.
struct DistanceBracket {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double value) const { return lower <= value && value <= upper; }
  friend bool operator==(const DistanceBracket&, const DistanceBracket&) = default;
};

inline constexpr int kDefaultSubsamples = 4;

/// Directed distance sup_{p in from} d(p, to), bracketed.
DistanceBracket directed_hausdorff(const GridSet& from, const GridSet& to,
                                   int subsamples = kDefaultSubsamples);

/// Hausdorff distance between two non-empty grid sets (geometries may
/// differ). Each occupied cell is probed on a subsamples x subsamples
/// lattice with exact point-to-union distances; the upper end adds half the
/// lattice diagonal. Cells covered by the other set contribute exactly 0.
DistanceBracket hausdorff(const GridSet& k, const GridSet& l,
                          int subsamples = kDefaultSubsamples);

/// Planar polygonal chain. Construction checks vertex count and distinct
/// consecutive vertices; simplicity is computed once and queried with
/// is_simple() because grid boundaries with pinch points are legitimately
/// non-simple.
class Polyline {
 public:
  Polyline(std::vector<Point> vertices, bool closed);

  const std::vector<Point>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  bool is_simple() const { return simple_; }
  std::size_t segment_count() const;
  std::pair<Point, Point> segment(std::size_t k) const;
  double length() const;

 private:
  std::vector<Point> vertices_;
  bool closed_;
  bool simple_;
};

double distance_to_segment(Point p, Point a, Point b);
double distance_to(const Polyline& chain, Point p);

/// Area of the eps-neighbourhood of a chain, rasterized on square cells of
/// side eps / refine.
DistanceBracket tube_area(const Polyline& chain, double eps, int refine);

/// Boundary of the closed cell union as closed rectilinear chains, traced
/// with the set on the left. At a pinch (corner contact) the trace continues
/// into the touching cell, so the chain visits the pinch twice and reports
/// is_simple() == false.
std::vector<Polyline> boundary_chains(const GridSet& set);

}  // namespace hvconic
