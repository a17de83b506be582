#include "hvconic/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace hvconic {

double dist_p(Point u, Point v, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidParameter, "p-norm needs p >= 1");
  const double dx = std::abs(u.x - v.x);
  const double dy = std::abs(u.y - v.y);
  if (p == 1.0) return dx + dy;
  if (p == 2.0) return std::hypot(dx, dy);
  if (std::isinf(p)) return std::max(dx, dy);
  // scale by the larger term so large p does not overflow
  const double big = std::max(dx, dy);
  if (big == 0.0) return 0.0;
  const double small = std::min(dx, dy) / big;
  return big * std::pow(1.0 + std::pow(small, p), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Hausdorff

namespace {

double overlap_area(const Box& r, const Box& c) {
  const double w = std::min(r.b(), c.b()) - std::max(r.a(), c.a());
  const double h = std::min(r.d(), c.d()) - std::max(r.c(), c.c());
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

}  // namespace

DistanceBracket directed_hausdorff(const GridSet& from, const GridSet& to, int subsamples) {
  if (subsamples < 2) {
    throw Error(ErrorCode::InvalidParameter, "need at least 2 samples per cell edge");
  }
  if (from.empty() || to.empty()) {
    throw Error(ErrorCode::InvalidParameter, "hausdorff: set is empty");
  }
  const CellRects target(to);
  const auto& g = from.geometry();
  const double sx = g.cell_width() / (subsamples - 1);
  const double sy = g.cell_height() / (subsamples - 1);
  const double slack = 0.5 * std::hypot(sx, sy);

  DistanceBracket out;
  for (auto [i, j] : from.occupied()) {
    const Box cell = g.cell(i, j);
    // A cell inside the other set contributes exactly zero.
    double covered = 0.0;
    for (const auto& r : target.rects()) covered += overlap_area(cell, r);
    if (covered >= cell.area() * (1.0 - 1e-12)) continue;

    double cell_max = 0.0;
    for (int v = 0; v < subsamples; ++v) {
      const double y = v + 1 == subsamples ? cell.d() : cell.c() + v * sy;
      for (int u = 0; u < subsamples; ++u) {
        const double x = u + 1 == subsamples ? cell.b() : cell.a() + u * sx;
        cell_max = std::max(cell_max, target.distance({x, y}));
      }
    }
    out.lower = std::max(out.lower, cell_max);
    out.upper = std::max(out.upper, cell_max + slack);
  }
  return out;
}

DistanceBracket hausdorff(const GridSet& k, const GridSet& l, int subsamples) {
  const auto kl = directed_hausdorff(k, l, subsamples);
  const auto lk = directed_hausdorff(l, k, subsamples);
  return {std::max(kl.lower, lk.lower), std::max(kl.upper, lk.upper)};
}

// ---------------------------------------------------------------------------
// Polyline

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

bool same_point(Point a, Point b) { return a.x == b.x && a.y == b.y; }

}  // namespace

Polyline::Polyline(std::vector<Point> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed), simple_(true) {
  if (vertices_.size() < 2 || (closed_ && vertices_.size() < 3)) {
    throw Error(ErrorCode::InvalidParameter, "polyline needs >= 2 vertices (>= 3 if closed)");
  }
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(ErrorCode::InvalidParameter, "polyline vertex is not finite");
    }
  }
  const std::size_t segs = segment_count();
  for (std::size_t k = 0; k < segs; ++k) {
    auto [a, b] = segment(k);
    if (same_point(a, b)) {
      throw Error(ErrorCode::InvalidParameter, "polyline has repeated consecutive vertices");
    }
  }
  for (std::size_t s = 0; s < segs && simple_; ++s) {
    for (std::size_t t = s + 1; t < segs; ++t) {
      auto [p1, p2] = segment(s);
      auto [q1, q2] = segment(t);
      const bool next = t == s + 1;
      const bool wraps = closed_ && s == 0 && t == segs - 1;
      if (next || wraps) {
        // Neighbours share one vertex; they may not fold back onto each other.
        const Point shared = next ? p2 : p1;
        const Point u = next ? p1 : p2;
        const Point w = next ? q2 : q1;
        const double c = cross(shared, u, w);
        const double dot = (u.x - shared.x) * (w.x - shared.x) + (u.y - shared.y) * (w.y - shared.y);
        if (c == 0.0 && dot > 0.0) {
          simple_ = false;
          break;
        }
        continue;
      }
      if (segments_intersect(p1, p2, q1, q2)) {
        simple_ = false;
        break;
      }
    }
  }
}

std::size_t Polyline::segment_count() const {
  return closed_ ? vertices_.size() : vertices_.size() - 1;
}

std::pair<Point, Point> Polyline::segment(std::size_t k) const {
  return {vertices_[k], vertices_[(k + 1) % vertices_.size()]};
}

double Polyline::length() const {
  double total = 0.0;
  for (std::size_t k = 0; k < segment_count(); ++k) {
    auto [a, b] = segment(k);
    total += std::hypot(b.x - a.x, b.y - a.y);
  }
  return total;
}

double distance_to_segment(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double distance_to(const Polyline& chain, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < chain.segment_count(); ++k) {
    auto [a, b] = chain.segment(k);
    best = std::min(best, distance_to_segment(p, a, b));
  }
  return best;
}

DistanceBracket tube_area(const Polyline& chain, double eps, int refine) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidParameter, "tube radius must be positive");
  }
  if (refine < 1) throw Error(ErrorCode::InvalidParameter, "refine must be >= 1");

  const double side = eps / refine;
  const double margin = side * std::sqrt(0.5);
  double x0 = chain.vertices().front().x, x1 = x0;
  double y0 = chain.vertices().front().y, y1 = y0;
  for (const auto& v : chain.vertices()) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  x0 -= eps + side;
  y0 -= eps + side;
  const auto cols = static_cast<long>(std::ceil((x1 + eps + side - x0) / side));
  const auto rows = static_cast<long>(std::ceil((y1 + eps + side - y0) / side));

  struct Seg {
    Point a, b;
    double ylo, yhi;
  };
  std::vector<Seg> segs;
  for (std::size_t k = 0; k < chain.segment_count(); ++k) {
    auto [a, b] = chain.segment(k);
    segs.push_back({a, b, std::min(a.y, b.y), std::max(a.y, b.y)});
  }

  const double reach = eps + margin;
  long inner = 0, outer = 0;
  std::vector<const Seg*> active;
  for (long r = 0; r < rows; ++r) {
    const double y = y0 + (r + 0.5) * side;
    active.clear();
    for (const auto& s : segs)
      if (y >= s.ylo - reach && y <= s.yhi + reach) active.push_back(&s);
    if (active.empty()) continue;
    for (long c = 0; c < cols; ++c) {
      const Point p{x0 + (c + 0.5) * side, y};
      double d = std::numeric_limits<double>::infinity();
      for (const Seg* s : active) d = std::min(d, distance_to_segment(p, s->a, s->b));
      outer += d <= eps + margin;
      inner += d <= eps - margin;
    }
  }
  const double cell = side * side;
  return {static_cast<double>(inner) * cell, static_cast<double>(outer) * cell};
}

// ---------------------------------------------------------------------------
// Boundary tracing

namespace {

struct LatticePoint {
  int i, j;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct Edge {
  LatticePoint from, to;
  bool used = false;
};

// Preference of an outgoing direction relative to the incoming one:
// right turn first, then straight, then left.
int turn_rank(LatticePoint in_dir, LatticePoint out_dir) {
  const int c = in_dir.i * out_dir.j - in_dir.j * out_dir.i;
  if (c < 0) return 0;
  if (c == 0) return 1;
  return 2;
}

}  // namespace

std::vector<Polyline> boundary_chains(const GridSet& set) {
  std::vector<Edge> edges;
  for (auto [i, j] : set.occupied()) {
    if (!set.contains_safe(i, j - 1)) edges.push_back({{i, j}, {i + 1, j}});
    if (!set.contains_safe(i + 1, j)) edges.push_back({{i + 1, j}, {i + 1, j + 1}});
    if (!set.contains_safe(i, j + 1)) edges.push_back({{i + 1, j + 1}, {i, j + 1}});
    if (!set.contains_safe(i - 1, j)) edges.push_back({{i, j + 1}, {i, j}});
  }
  std::multimap<LatticePoint, std::size_t> outgoing;
  for (std::size_t k = 0; k < edges.size(); ++k) outgoing.emplace(edges[k].from, k);

  const auto& g = set.geometry();
  std::vector<Polyline> chains;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (edges[start].used) continue;
    std::vector<LatticePoint> path{edges[start].from};
    std::size_t cur = start;
    while (true) {
      edges[cur].used = true;
      const LatticePoint at = edges[cur].to;
      const LatticePoint in_dir{at.i - edges[cur].from.i, at.j - edges[cur].from.j};
      std::size_t next = edges.size();
      int best_rank = 3;
      auto [lo, hi] = outgoing.equal_range(at);
      for (auto it = lo; it != hi; ++it) {
        const Edge& e = edges[it->second];
        if (e.used) continue;
        const int rank = turn_rank(in_dir, {e.to.i - e.from.i, e.to.j - e.from.j});
        if (rank < best_rank) {
          best_rank = rank;
          next = it->second;
        }
      }
      // Only the start vertex runs out of unused edges.
      if (next == edges.size()) break;
      path.push_back(at);
      cur = next;
    }
    // Drop collinear interior vertices (cyclically).
    std::vector<LatticePoint> corners;
    const std::size_t len = path.size();
    for (std::size_t k = 0; k < len; ++k) {
      const auto& prev = path[(k + len - 1) % len];
      const auto& here = path[k];
      const auto& nxt = path[(k + 1) % len];
      const int c = (here.i - prev.i) * (nxt.j - here.j) - (here.j - prev.j) * (nxt.i - here.i);
      if (c != 0) corners.push_back(here);
    }
    std::vector<Point> vertices;
    vertices.reserve(corners.size());
    for (const auto& c : corners) vertices.push_back({g.x_line(c.i), g.y_line(c.j)});
    chains.emplace_back(std::move(vertices), true);
  }
  return chains;
}

}  // namespace hvconic
