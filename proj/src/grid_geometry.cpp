#include "hvconic/grid_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "hvconic/random.hpp"

namespace hvconic {

namespace {

void require_nonempty(const GridSet& set, const char* what) {
  if (set.empty()) {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + ": set is empty");
  }
}

// Tolerance for comparing coordinates produced by different grids over the
// same box.
double coordinate_tolerance(const GridGeometry& g) {
  return 1e-9 * std::min(g.cell_width(), g.cell_height());
}

struct Run {
  int first = -1;
  int last = -1;
  bool empty() const { return first < 0; }
};

// Occupied run of a row (along i) or column (along j); nullopt when the
// occupied cells are not contiguous.
template <class Occupied>
std::optional<Run> contiguous_run(int length, Occupied occupied) {
  Run run;
  for (int k = 0; k < length; ++k) {
    if (!occupied(k)) continue;
    if (run.empty()) {
      run.first = run.last = k;
    } else if (run.last == k - 1) {
      run.last = k;
    } else {
      return std::nullopt;
    }
  }
  return run;
}

// Closed extents [first, last + 1] of two runs meet (touching allowed).
bool runs_touch(const Run& r1, const Run& r2) {
  return r2.first <= r1.last + 1 && r1.first <= r2.last + 1;
}

template <class Neighbors>
bool connected_impl(const GridSet& set, const Neighbors& neighbors) {
  if (set.empty()) return false;
  const int m = set.m(), n = set.n();
  std::vector<std::uint8_t> seen(set.cells().size(), 0);
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < n && stack.empty(); ++j) {
    for (int i = 0; i < m; ++i) {
      if (set.contains(i, j)) {
        stack.emplace_back(i, j);
        seen[static_cast<std::size_t>(j) * m + i] = 1;
        break;
      }
    }
  }
  std::size_t reached = 0;
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    ++reached;
    for (auto [di, dj] : neighbors) {
      const int ni = i + di, nj = j + dj;
      if (!set.contains_safe(ni, nj)) continue;
      auto& flag = seen[static_cast<std::size_t>(nj) * m + ni];
      if (flag) continue;
      flag = 1;
      stack.emplace_back(ni, nj);
    }
  }
  return reached == set.count();
}

constexpr std::pair<int, int> kEdgeNeighbors[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr std::pair<int, int> kAllNeighbors[] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                                 {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

std::vector<Interval> merge_runs(const std::vector<int>& counts,
                                 const GridGeometry& g, bool along_x) {
  std::vector<Interval> out;
  const int len = static_cast<int>(counts.size());
  int k = 0;
  while (k < len) {
    if (counts[k] == 0) {
      ++k;
      continue;
    }
    int end = k;
    while (end + 1 < len && counts[end + 1] > 0) ++end;
    if (along_x) {
      out.push_back({g.x_line(k), g.x_line(end + 1)});
    } else {
      out.push_back({g.y_line(k), g.y_line(end + 1)});
    }
    k = end + 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Box / GridGeometry

Box::Box(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)) ||
      !(a < b) || !(c < d)) {
    throw Error(ErrorCode::InvalidParameter,
                "degenerate box: need a < b and c < d with finite coordinates");
  }
}

double Box::diameter() const { return std::hypot(width(), height()); }

double distance_to(const Box& r, Point p) {
  const double dx = std::max({r.a() - p.x, 0.0, p.x - r.b()});
  const double dy = std::max({r.c() - p.y, 0.0, p.y - r.d()});
  if (dx == 0.0) return dy;
  if (dy == 0.0) return dx;
  return std::hypot(dx, dy);
}

GridGeometry::GridGeometry(Box box, int m, int n) : box_(box), m_(m), n_(n) {
  if (m < 1 || n < 1) {
    throw Error(ErrorCode::InvalidParameter, "grid dimensions must be positive");
  }
}

double GridGeometry::x_line(int i) const {
  if (i == m_) return box_.b();
  return box_.a() + box_.width() * i / m_;
}

double GridGeometry::y_line(int j) const {
  if (j == n_) return box_.d();
  return box_.c() + box_.height() * j / n_;
}

Box GridGeometry::cell(int i, int j) const {
  return Box(x_line(i), x_line(i + 1), y_line(j), y_line(j + 1));
}

Point GridGeometry::cell_center(int i, int j) const {
  return {0.5 * (x_line(i) + x_line(i + 1)), 0.5 * (y_line(j) + y_line(j + 1))};
}

GridGeometry GridGeometry::refined(int factor) const {
  if (factor < 1) throw Error(ErrorCode::InvalidParameter, "refinement factor must be >= 1");
  return GridGeometry(box_, m_ * factor, n_ * factor);
}

// ---------------------------------------------------------------------------
// GridSet

GridSet::GridSet(GridGeometry geometry)
    : geometry_(geometry), cells_(geometry.cell_count(), 0) {}

GridSet::GridSet(GridGeometry geometry, std::vector<std::uint8_t> cells)
    : geometry_(geometry), cells_(std::move(cells)) {
  if (cells_.size() != geometry_.cell_count()) {
    throw Error(ErrorCode::InvalidParameter, "cell indicator size does not match geometry");
  }
  for (auto& c : cells_) {
    c = c ? 1 : 0;
    count_ += c;
  }
}

GridSet GridSet::full(const GridGeometry& geometry) {
  return GridSet(geometry, std::vector<std::uint8_t>(geometry.cell_count(), 1));
}

GridSet GridSet::from_cells(const GridGeometry& geometry,
                            const std::vector<std::pair<int, int>>& cells) {
  std::vector<std::uint8_t> bits(geometry.cell_count(), 0);
  for (auto [i, j] : cells) {
    if (i < 0 || j < 0 || i >= geometry.m() || j >= geometry.n()) {
      throw Error(ErrorCode::InvalidParameter, "cell index out of range");
    }
    bits[static_cast<std::size_t>(j) * geometry.m() + i] = 1;
  }
  return GridSet(geometry, std::move(bits));
}

GridSet GridSet::from_mask(const GridGeometry& geometry, std::uint64_t mask) {
  if (geometry.cell_count() > 64) {
    throw Error(ErrorCode::TooLarge, "mask construction needs at most 64 cells");
  }
  std::vector<std::uint8_t> bits(geometry.cell_count(), 0);
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = (mask >> k) & 1U;
  return GridSet(geometry, std::move(bits));
}

std::vector<int> GridSet::column_counts() const {
  std::vector<int> out(m(), 0);
  for (int j = 0; j < n(); ++j)
    for (int i = 0; i < m(); ++i) out[i] += contains(i, j);
  return out;
}

std::vector<int> GridSet::row_counts() const {
  std::vector<int> out(n(), 0);
  for (int j = 0; j < n(); ++j)
    for (int i = 0; i < m(); ++i) out[j] += contains(i, j);
  return out;
}

std::vector<std::pair<int, int>> GridSet::occupied() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(count_);
  for (int j = 0; j < n(); ++j)
    for (int i = 0; i < m(); ++i)
      if (contains(i, j)) out.emplace_back(i, j);
  return out;
}

GridSet GridSet::toggled(int i, int j) const {
  if (i < 0 || j < 0 || i >= m() || j >= n()) {
    throw Error(ErrorCode::InvalidParameter, "cell index out of range");
  }
  GridSet copy = *this;
  auto& c = copy.cells_[static_cast<std::size_t>(j) * m() + i];
  c ^= 1U;
  copy.count_ = c ? count_ + 1 : count_ - 1;
  return copy;
}

bool GridSet::subset_of(const GridSet& other) const {
  if (!(geometry_ == other.geometry_)) {
    throw Error(ErrorCode::GeometryMismatch, "subset test needs a shared geometry");
  }
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k] && !other.cells_[k]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Projections and predicates

Projections projections(const GridSet& set) {
  require_nonempty(set, "projections");
  return {merge_runs(set.column_counts(), set.geometry(), true),
          merge_runs(set.row_counts(), set.geometry(), false)};
}

namespace {

double box_tolerance(const Box& box) {
  const double scale = std::max({std::abs(box.a()), std::abs(box.b()), std::abs(box.c()),
                                 std::abs(box.d()), box.width(), box.height()});
  return 1e-12 * std::max(1.0, scale);
}

}  // namespace

bool in_level_set(const GridSet& set, const Box& box) {
  const auto pr = projections(set);
  const double tol = box_tolerance(box);
  auto same = [tol](double u, double v) { return std::abs(u - v) <= tol; };
  return pr.x.size() == 1 && pr.y.size() == 1 && same(pr.x[0].lo, box.a()) &&
         same(pr.x[0].hi, box.b()) && same(pr.y[0].lo, box.c()) && same(pr.y[0].hi, box.d());
}

bool in_sublevel_set(const GridSet& set, const Box& box) {
  const auto pr = projections(set);
  const double tol = box_tolerance(box);
  return pr.x.front().lo >= box.a() - tol && pr.x.back().hi <= box.b() + tol &&
         pr.y.front().lo >= box.c() - tol && pr.y.back().hi <= box.d() + tol;
}

Box bounding_box(const GridSet& set) {
  const auto pr = projections(set);
  return Box(pr.x.front().lo, pr.x.back().hi, pr.y.front().lo, pr.y.back().hi);
}

bool is_hv_convex(const GridSet& set) {
  const int m = set.m(), n = set.n();
  std::vector<Run> rows(n), cols(m);
  for (int j = 0; j < n; ++j) {
    auto run = contiguous_run(m, [&](int i) { return set.contains(i, j); });
    if (!run) return false;
    rows[j] = *run;
  }
  for (int i = 0; i < m; ++i) {
    auto run = contiguous_run(n, [&](int j) { return set.contains(i, j); });
    if (!run) return false;
    cols[i] = *run;
  }
  // Sections on a shared grid line see both neighbouring runs.
  for (int j = 0; j + 1 < n; ++j) {
    if (!rows[j].empty() && !rows[j + 1].empty() && !runs_touch(rows[j], rows[j + 1]))
      return false;
  }
  for (int i = 0; i + 1 < m; ++i) {
    if (!cols[i].empty() && !cols[i + 1].empty() && !runs_touch(cols[i], cols[i + 1]))
      return false;
  }
  return true;
}

bool is_connected(const GridSet& set) { return connected_impl(set, kAllNeighbors); }

bool is_edge_connected(const GridSet& set) { return connected_impl(set, kEdgeNeighbors); }

bool has_thin_contact(const GridSet& set) {
  return is_connected(set) && !is_edge_connected(set);
}

ColumnProfile bound_functions(const GridSet& set) {
  ColumnProfile profile;
  const auto& g = set.geometry();
  for (int i = 0; i < set.m(); ++i) {
    auto run = contiguous_run(set.n(), [&](int j) { return set.contains(i, j); });
    if (!run) {
      throw Error(ErrorCode::NonConvexColumn,
                  "column " + std::to_string(i) + " is not a contiguous run");
    }
    if (run->empty()) continue;
    profile.columns.push_back(i);
    profile.lower.push_back(g.y_line(run->first));
    profile.upper.push_back(g.y_line(run->last + 1));
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Minkowski combination

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0 || num > den) {
    throw Error(ErrorCode::InvalidParameter, "combination weight must be p/q in [0, 1]");
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

GridSet combine(const GridSet& first, const GridSet& second, const Rational& t) {
  if (!(first.geometry() == second.geometry())) {
    throw Error(ErrorCode::GeometryMismatch, "combine needs operands on one geometry");
  }
  require_nonempty(first, "combine");
  require_nonempty(second, "combine");
  const int q = static_cast<int>(t.den());
  const int p = static_cast<int>(t.num());
  const int m = first.m(), n = first.n();
  const GridGeometry refined = first.geometry().refined(q);

  // t*cell(i,j) + (1-t)*cell(i',j') is the q x q block of refined cells
  // starting at (p*i + (q-p)*i', p*j + (q-p)*j').
  const int sm = q * (m - 1) + 1;
  const int sn = q * (n - 1) + 1;
  std::vector<std::uint8_t> starts(static_cast<std::size_t>(sm) * sn, 0);
  const auto a = first.occupied();
  const auto b = second.occupied();
  for (auto [i1, j1] : a) {
    for (auto [i2, j2] : b) {
      const int si = p * i1 + (q - p) * i2;
      const int sj = p * j1 + (q - p) * j2;
      starts[static_cast<std::size_t>(sj) * sm + si] = 1;
    }
  }
  std::vector<std::uint8_t> cells(refined.cell_count(), 0);
  const int rm = refined.m();
  for (int sj = 0; sj < sn; ++sj) {
    for (int si = 0; si < sm; ++si) {
      if (!starts[static_cast<std::size_t>(sj) * sm + si]) continue;
      for (int dj = 0; dj < q; ++dj)
        for (int di = 0; di < q; ++di)
          cells[static_cast<std::size_t>(sj + dj) * rm + si + di] = 1;
    }
  }
  return GridSet(refined, std::move(cells));
}

// ---------------------------------------------------------------------------
// Distances, dilation, coverings

CellRects::CellRects(const GridSet& set) {
  const auto& g = set.geometry();
  for (auto [i, j] : set.occupied()) rects_.push_back(g.cell(i, j));
}

double CellRects::distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : rects_) {
    const double d = distance_to(r, p);
    if (d < best) {
      best = d;
      if (best == 0.0) break;
    }
  }
  return best;
}

double distance_to(const GridSet& set, Point p) { return CellRects(set).distance(p); }

DilationBracket dilate(const GridSet& set, double eps, int refine) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidParameter, "dilation radius must be positive");
  }
  if (refine < 1) throw Error(ErrorCode::InvalidParameter, "refine must be >= 1");
  require_nonempty(set, "dilate");

  const auto& g = set.geometry();
  const double w = g.cell_width() / refine;
  const double h = g.cell_height() / refine;
  int ex = static_cast<int>(std::ceil(eps / w));
  int ey = static_cast<int>(std::ceil(eps / h));
  if (ex * w < eps) ++ex;
  if (ey * h < eps) ++ey;
  const Box& box = g.box();
  const GridGeometry out_geom(
      Box(box.a() - ex * w, box.b() + ex * w, box.c() - ey * h, box.d() + ey * h),
      g.m() * refine + 2 * ex, g.n() * refine + 2 * ey);

  const double margin = 0.5 * std::hypot(w, h);
  const CellRects rects(set);
  std::vector<std::uint8_t> inner(out_geom.cell_count(), 0);
  std::vector<std::uint8_t> outer(out_geom.cell_count(), 0);
  for (int j = 0; j < out_geom.n(); ++j) {
    for (int i = 0; i < out_geom.m(); ++i) {
      const double d = rects.distance(out_geom.cell_center(i, j));
      const std::size_t k = static_cast<std::size_t>(j) * out_geom.m() + i;
      outer[k] = d <= eps + margin;
      inner[k] = d <= eps - margin;
    }
  }
  return {GridSet(out_geom, std::move(inner)), GridSet(out_geom, std::move(outer))};
}

GridSet min_cover(const GridSet& set, const GridGeometry& coarse, CoverContact contact) {
  require_nonempty(set, "min_cover");
  const double tol = std::min(coordinate_tolerance(set.geometry()), coordinate_tolerance(coarse));
  const Box bb = bounding_box(set);
  const Box& cb = coarse.box();
  if (bb.a() < cb.a() - tol || bb.b() > cb.b() + tol || bb.c() < cb.c() - tol ||
      bb.d() > cb.d() + tol) {
    throw Error(ErrorCode::CoverageError, "coarse box does not contain the set");
  }
  const CellRects rects(set);
  auto meets = [&](const Box& r, const Box& c) {
    if (contact == CoverContact::Closed) {
      return r.a() <= c.b() + tol && c.a() <= r.b() + tol && r.c() <= c.d() + tol &&
             c.c() <= r.d() + tol;
    }
    return r.a() < c.b() - tol && c.a() < r.b() - tol && r.c() < c.d() - tol &&
           c.c() < r.d() - tol;
  };
  std::vector<std::uint8_t> cells(coarse.cell_count(), 0);
  for (int j = 0; j < coarse.n(); ++j) {
    for (int i = 0; i < coarse.m(); ++i) {
      const Box r = coarse.cell(i, j);
      cells[static_cast<std::size_t>(j) * coarse.m() + i] =
          std::any_of(rects.rects().begin(), rects.rects().end(),
                      [&](const Box& c) { return meets(r, c); });
    }
  }
  return GridSet(coarse, std::move(cells));
}

double area(const GridSet& set) {
  return static_cast<double>(set.count()) * set.geometry().cell_width() *
         set.geometry().cell_height();
}

// ---------------------------------------------------------------------------
// Generation and enumeration

GridSet sample_hv_convex(const GridGeometry& geometry, std::uint64_t seed,
                         bool require_full_box) {
  Rng rng(seed);
  const int m = geometry.m(), n = geometry.n();
  int first = 0, last = m - 1;
  if (!require_full_box) {
    first = rng.uniform_int(0, m - 1);
    last = rng.uniform_int(0, m - 1);
    if (first > last) std::swap(first, last);
  }
  // Column i holds rows [lower[i], upper[i]]. upper is unimodal and lower is
  // anti-unimodal, so every row section is an interval; consecutive columns
  // keep touching closed extents, which makes the union connected.
  std::vector<int> lower(m, -1), upper(m, -1);
  int lo = rng.uniform_int(0, n - 1), hi = rng.uniform_int(0, n - 1);
  if (lo > hi) std::swap(lo, hi);
  lower[first] = lo;
  upper[first] = hi;
  bool upper_falling = false, lower_rising = false;
  for (int i = first + 1; i <= last; ++i) {
    const int gp = lower[i - 1], hp = upper[i - 1];
    const int h_lo = lower_rising ? gp : std::max(0, gp - 1);
    const int h_hi = upper_falling ? hp : n - 1;
    const int hn = rng.uniform_int(h_lo, h_hi);
    if (hn < hp) upper_falling = true;
    const int g_lo = lower_rising ? gp : 0;
    const int g_hi = std::min(hn, hp + 1);
    const int gn = rng.uniform_int(g_lo, g_hi);
    if (gn > gp) lower_rising = true;
    lower[i] = gn;
    upper[i] = hn;
  }
  if (require_full_box) {
    // Raising a peak or lowering a valley keeps both shape constraints.
    auto top = std::max_element(upper.begin(), upper.end());
    *top = n - 1;
    auto bottom = std::min_element(lower.begin(), lower.end());
    *bottom = 0;
  }
  std::vector<std::uint8_t> cells(geometry.cell_count(), 0);
  for (int i = first; i <= last; ++i)
    for (int j = lower[i]; j <= upper[i]; ++j) cells[static_cast<std::size_t>(j) * m + i] = 1;
  return GridSet(geometry, std::move(cells));
}

std::vector<GridSet> enumerate_hv_connected(const GridGeometry& geometry,
                                            bool require_full_box) {
  const auto cells = static_cast<int>(geometry.cell_count());
  if (cells > kEnumerationLimit) {
    throw Error(ErrorCode::TooLarge, "enumeration limited to " +
                                         std::to_string(kEnumerationLimit) + " cells");
  }
  std::vector<GridSet> out;
  const std::uint64_t total = std::uint64_t{1} << cells;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(cells));
  for (std::uint64_t code = 1; code < total; ++code) {
    // Cell 0 is the most significant position of the indicator string.
    for (int k = 0; k < cells; ++k) bits[k] = (code >> (cells - 1 - k)) & 1U;
    GridSet set(geometry, bits);
    if (!is_hv_convex(set) || !is_connected(set)) continue;
    if (require_full_box && !in_level_set(set, geometry.box())) continue;
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace hvconic
