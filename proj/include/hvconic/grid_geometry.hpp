#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hvconic/error.hpp"

namespace hvconic {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-parallel rectangle [a,b] x [c,d] with a < b and c < d.
class Box {
 public:
  Box(double a, double b, double c, double d);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double width() const { return b_ - a_; }
  double height() const { return d_ - c_; }
  double perimeter() const { return 2.0 * width() + 2.0 * height(); }
  double area() const { return width() * height(); }
  double diameter() const;

  bool contains(Point p) const {
    return a_ <= p.x && p.x <= b_ && c_ <= p.y && p.y <= d_;
  }

  friend bool operator==(const Box&, const Box&) = default;

 private:
  double a_, b_, c_, d_;
};

/// Euclidean distance from p to the closed rectangle r (0 inside).
double distance_to(const Box& r, Point p);

/// Uniform m x n partition of a box. Column i spans [x_i, x_{i+1}], row j
/// spans [y_j, y_{j+1}].
class GridGeometry {
 public:
  GridGeometry(Box box, int m, int n);

  const Box& box() const { return box_; }
  int m() const { return m_; }
  int n() const { return n_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(m_) * n_; }
  double cell_width() const { return box_.width() / m_; }
  double cell_height() const { return box_.height() / n_; }

  /// Grid line x_i; x_0 = a and x_m = b exactly.
  double x_line(int i) const;
  double y_line(int j) const;
  Box cell(int i, int j) const;
  Point cell_center(int i, int j) const;

  /// Same box, each cell split into factor x factor subcells.
  GridGeometry refined(int factor) const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  Box box_;
  int m_;
  int n_;
};

/// Closed union of cells of a grid. Cell (i, j) is stored at j * m + i.
/// An empty GridSet is representable (e.g. an inner dilation bracket), but
/// operations documented as needing a non-empty compact set reject it.
class GridSet {
 public:
  explicit GridSet(GridGeometry geometry);
  GridSet(GridGeometry geometry, std::vector<std::uint8_t> cells);

  static GridSet full(const GridGeometry& geometry);
  static GridSet from_cells(const GridGeometry& geometry,
                            const std::vector<std::pair<int, int>>& cells);
  /// Bit k of mask sets cell index k (requires cell_count() <= 64).
  static GridSet from_mask(const GridGeometry& geometry, std::uint64_t mask);

  const GridGeometry& geometry() const { return geometry_; }
  int m() const { return geometry_.m(); }
  int n() const { return geometry_.n(); }

  bool contains(int i, int j) const {
    return cells_[static_cast<std::size_t>(j) * geometry_.m() + i] != 0;
  }
  /// Out-of-range indices read as empty.
  bool contains_safe(int i, int j) const {
    return i >= 0 && j >= 0 && i < m() && j < n() && contains(i, j);
  }

  const std::vector<std::uint8_t>& cells() const { return cells_; }
  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }

  std::vector<int> column_counts() const;
  std::vector<int> row_counts() const;
  std::vector<std::pair<int, int>> occupied() const;

  GridSet toggled(int i, int j) const;
  bool subset_of(const GridSet& other) const;

  friend bool operator==(const GridSet& l, const GridSet& r) {
    return l.geometry_ == r.geometry_ && l.cells_ == r.cells_;
  }

 private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> cells_;
  std::size_t count_ = 0;
};

struct Projections {
  std::vector<Interval> x;
  std::vector<Interval> y;
};

/// pr1(L) and pr2(L) as minimal lists of disjoint closed intervals.
Projections projections(const GridSet& set);

/// pr1(L) x pr2(L) == box.
bool in_level_set(const GridSet& set, const Box& box);
/// pr1(L) x pr2(L) is contained in box.
bool in_sublevel_set(const GridSet& set, const Box& box);

/// Axis-parallel bounding box of a non-empty set.
Box bounding_box(const GridSet& set);

/// Every horizontal and vertical section of the closed union is an interval.
bool is_hv_convex(const GridSet& set);

/// Topological connectedness of the closed union (corner contact connects).
bool is_connected(const GridSet& set);

/// Connectedness through shared edges only.
bool is_edge_connected(const GridSet& set);

/// Connected, but only because some cells touch at a corner point.
bool has_thin_contact(const GridSet& set);

/// Lower bound g and upper bound h of each occupied column.
struct ColumnProfile {
  std::vector<int> columns;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Throws NonConvexColumn if an occupied column is not one contiguous run.
ColumnProfile bound_functions(const GridSet& set);

/// Weight p/q in [0, 1], kept in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// Exact Minkowski combination t*L1 + (1-t)*L2 on the geometry refined by
/// the denominator of t.
GridSet combine(const GridSet& first, const GridSet& second, const Rational& t);

/// Two-sided rasterization of the outer parallel body: inner is contained
/// in the eps-body, which is contained in outer.
struct DilationBracket {
  GridSet inner;
  GridSet outer;
};

DilationBracket dilate(const GridSet& set, double eps, int refine);

enum class CoverContact {
  Closed,    // coarse cell meets L (a shared corner counts)
  Interior,  // coarse cell overlaps L in positive area
};

/// Union of the coarse cells meeting L.
GridSet min_cover(const GridSet& set, const GridGeometry& coarse,
                  CoverContact contact = CoverContact::Closed);

double area(const GridSet& set);

/// Random connected hv-convex set; deterministic in seed.
GridSet sample_hv_convex(const GridGeometry& geometry, std::uint64_t seed,
                         bool require_full_box);

/// Largest m*n accepted by enumerate_hv_connected.
inline constexpr int kEnumerationLimit = 20;

/// All connected hv-convex sets on a small grid, lexicographic on the cell
/// indicator read in storage order.
std::vector<GridSet> enumerate_hv_connected(const GridGeometry& geometry,
                                            bool require_full_box);

/// Occupied cells materialized as rectangles, for repeated distance queries.
class CellRects {
 public:
  explicit CellRects(const GridSet& set);

  const std::vector<Box>& rects() const { return rects_; }
  /// Exact Euclidean distance from p to the closed union (0 inside).
  double distance(Point p) const;

 private:
  std::vector<Box> rects_;
};

/// Euclidean distance from p to the closed union of cells.
double distance_to(const GridSet& set, Point p);

}  // namespace hvconic
