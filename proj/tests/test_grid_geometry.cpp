#include <doctest.h>

#include <cmath>

#include "hvconic/grid_geometry.hpp"
#include "hvconic/random.hpp"
#include "oracles.hpp"

using namespace hvconic;
using oracle::picture;

namespace {

const Box kUnit2(0.0, 2.0, 0.0, 2.0);

bool throws_code(auto&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

GridSet random_mask_set(const GridGeometry& g, Rng& rng) {
  std::vector<std::uint8_t> cells(g.cell_count());
  for (auto& c : cells) c = rng.bernoulli(0.5);
  return GridSet(g, std::move(cells));
}

}  // namespace

TEST_CASE("box and geometry basics") {
  CHECK(throws_code([] { Box(1.0, 1.0, 0.0, 1.0); }, ErrorCode::InvalidParameter));
  CHECK(throws_code([] { Box(0.0, 1.0, 2.0, 1.0); }, ErrorCode::InvalidParameter));
  CHECK(throws_code([] { GridGeometry(kUnit2, 0, 2); }, ErrorCode::InvalidParameter));
  const Box b(-1.0, 3.0, 0.0, 2.0);
  CHECK(b.perimeter() == doctest::Approx(12.0));
  CHECK(b.area() == doctest::Approx(8.0));
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 3, 7);
  CHECK(g.x_line(3) == 1.0);
  CHECK(g.y_line(7) == 1.0);
  CHECK(g.x_line(0) == 0.0);
}

TEST_CASE("projections") {
  const GridSet full = GridSet::full(GridGeometry(kUnit2, 2, 2));
  auto pr = projections(full);
  REQUIRE(pr.x.size() == 1);
  CHECK(pr.x[0] == Interval{0.0, 2.0});
  CHECK(pr.y[0] == Interval{0.0, 2.0});

  pr = projections(GridSet::from_cells(GridGeometry(kUnit2, 2, 2), {{0, 0}}));
  CHECK(pr.x == std::vector<Interval>{{0.0, 1.0}});
  CHECK(pr.y == std::vector<Interval>{{0.0, 1.0}});

  const GridSet gap = picture(Box(0.0, 1.0, 0.0, 3.0), {"1", "0", "1"});
  pr = projections(gap);
  CHECK(pr.x == std::vector<Interval>{{0.0, 1.0}});
  CHECK(pr.y == std::vector<Interval>{{0.0, 1.0}, {2.0, 3.0}});
}

TEST_CASE("level and sublevel sets") {
  const GridGeometry g(Box(0.0, 3.0, 0.0, 3.0), 3, 3);
  CHECK(in_level_set(GridSet::full(g), g.box()));
  const GridSet no_middle = picture(g.box(), {"101", "101", "101"});
  CHECK_FALSE(in_level_set(no_middle, g.box()));
  const GridSet single = GridSet::from_cells(g, {{1, 1}});
  CHECK_FALSE(in_level_set(single, g.box()));
  CHECK(in_sublevel_set(single, g.box()));
  CHECK_FALSE(in_sublevel_set(single, Box(1.5, 3.0, 0.0, 3.0)));
}

TEST_CASE("hv-convexity examples") {
  CHECK(is_hv_convex(GridSet::from_cells(GridGeometry(kUnit2, 2, 2), {{1, 0}})));
  CHECK(is_hv_convex(picture({"01", "10"})));
  CHECK_FALSE(is_hv_convex(picture({"00011", "11000"})));
  CHECK(is_hv_convex(picture({"00111", "11100"})));
  CHECK(is_hv_convex(picture({"00011", "11100"})));
  CHECK_FALSE(is_hv_convex(picture({"101"})));
}

TEST_CASE("hv-convexity agrees with the section oracle on every 3x3 subset") {
  const GridGeometry g(Box(0.0, 3.0, 0.0, 3.0), 3, 3);
  for (std::uint64_t mask = 1; mask < 512; ++mask) {
    const GridSet s = GridSet::from_mask(g, mask);
    CHECK_MESSAGE(is_hv_convex(s) == oracle::hv_convex_by_sections(s), "mask " << mask);
    CHECK_MESSAGE(is_connected(s) == oracle::connected_by_rectangles(s), "mask " << mask);
  }
}

TEST_CASE("hv-convexity and connectivity agree with oracles on random 5x4 sets") {
  const GridGeometry g(Box(-1.0, 1.5, 2.0, 3.0), 5, 4);
  Rng rng(42);
  for (int k = 0; k < 2000; ++k) {
    const GridSet s = random_mask_set(g, rng);
    if (s.empty()) continue;
    CHECK(is_hv_convex(s) == oracle::hv_convex_by_sections(s));
    CHECK(is_connected(s) == oracle::connected_by_rectangles(s));
  }
}

TEST_CASE("connectivity examples") {
  CHECK(is_connected(picture({"1"})));
  CHECK(is_connected(picture({"01", "10"})));
  CHECK_FALSE(is_edge_connected(picture({"01", "10"})));
  CHECK(has_thin_contact(picture({"01", "10"})));
  CHECK_FALSE(has_thin_contact(picture({"11", "10"})));
  CHECK_FALSE(is_connected(picture({"101"})));
}

TEST_CASE("bound functions") {
  const auto unit = bound_functions(picture({"1"}));
  REQUIRE(unit.columns == std::vector<int>{0});
  CHECK(unit.lower == std::vector<double>{0.0});
  CHECK(unit.upper == std::vector<double>{1.0});

  const auto stairs = bound_functions(picture({"01", "11"}));
  CHECK(stairs.lower == std::vector<double>{0.0, 0.0});
  CHECK(stairs.upper == std::vector<double>{1.0, 2.0});

  CHECK(throws_code([] { bound_functions(picture({"1", "0", "1"})); },
                    ErrorCode::NonConvexColumn));
}

TEST_CASE("combine: identity weights and the mismatched-box example") {
  const GridGeometry g(Box(0.0, 3.0, 0.0, 2.0), 3, 2);
  const GridSet l1 = picture(g.box(), {"110", "011"});
  const GridSet l2 = picture(g.box(), {"001", "111"});
  const GridSet at0 = combine(l1, l2, Rational(0, 1));
  CHECK(at0 == l2);
  const GridSet at1 = combine(l1, l2, Rational(3, 3));
  CHECK(at1 == l1);

  const GridGeometry big(Box(-3.0, 3.0, -3.0, 3.0), 6, 6);
  const GridSet outer = GridSet::full(big);
  const GridSet inner = GridSet::from_cells(big, {{2, 2}, {3, 2}, {2, 3}, {3, 3}});
  const GridSet mid = combine(outer, inner, Rational(1, 2));
  CHECK(area(mid) == 16.0);
  CHECK(bounding_box(mid) == Box(-2.0, 2.0, -2.0, 2.0));
  CHECK(0.5 * area(outer) + 0.5 * area(inner) == 20.0);

  CHECK(throws_code([&] { combine(l1, GridSet::full(GridGeometry(g.box(), 3, 3)), Rational(1, 2)); },
                    ErrorCode::GeometryMismatch));
  CHECK(throws_code([] { Rational(3, 2); }, ErrorCode::InvalidParameter));
  CHECK(throws_code([] { Rational(-1, 2); }, ErrorCode::InvalidParameter));
}

TEST_CASE("combine matches the brute-force Minkowski oracle") {
  const GridGeometry g(Box(0.0, 1.0, -1.0, 1.0), 4, 3);
  Rng rng(7);
  const std::pair<int, int> weights[] = {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {0, 1}, {1, 1}};
  for (int k = 0; k < 60; ++k) {
    GridSet a = random_mask_set(g, rng);
    GridSet b = random_mask_set(g, rng);
    if (a.empty() || b.empty()) continue;
    const auto [p, q] = weights[k % 6];
    const GridSet fast = combine(a, b, Rational(p, q));
    const Rational r(p, q);
    CHECK(fast == oracle::combine_brute(a, b, r.num(), r.den()));
  }
}

TEST_CASE("combine properties") {
  const GridGeometry g(Box(0.0, 6.0, 0.0, 6.0), 6, 6);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GridSet l1 = sample_hv_convex(g, seed, true);
    const GridSet l2 = sample_hv_convex(g, seed + 1000, true);
    for (const Rational t : {Rational(1, 2), Rational(1, 3), Rational(3, 5)}) {
      // Prop 2: the box level set is convex
      CHECK(in_level_set(combine(l1, l2, t), g.box()));
    }
    // combine(L, L, 1/2) contains L
    const GridSet self = combine(l1, l1, Rational(1, 2));
    const GridSet lifted = combine(l1, l1, Rational(1, 1));
    CHECK(oracle::combine_brute(l1, l1, 1, 1) == lifted);
    for (int j = 0; j < 12; ++j)
      for (int i = 0; i < 12; ++i)
        if (l1.contains(i / 2, j / 2)) CHECK(self.contains(i, j));
    // monotone in the first operand
    GridSet bigger = l1;
    for (int j = 0; j < 6; ++j) bigger = bigger.contains(0, j) ? bigger : bigger.toggled(0, j);
    CHECK(combine(l1, l2, Rational(1, 3)).subset_of(combine(bigger, l2, Rational(1, 3))));
  }
}

TEST_CASE("dilate: Steiner bracket for the unit square") {
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 1, 1);
  const double truth = oracle::steiner_rectangle(1.0, 1.0, 0.5);
  CHECK(truth == doctest::Approx(3.785398).epsilon(1e-6));
  double previous_width = INFINITY;
  for (int refine : {4, 8, 16, 32, 64}) {
    const auto body = dilate(GridSet::full(g), 0.5, refine);
    const double lo = area(body.inner), hi = area(body.outer);
    CHECK(lo <= truth);
    CHECK(truth <= hi);
    CHECK(body.inner.subset_of(body.outer));
    CHECK(hi - lo <= previous_width);
    previous_width = hi - lo;
  }
  CHECK(previous_width < 0.2);
}

TEST_CASE("dilate: small radius keeps the set in the outer bracket") {
  const GridGeometry g(Box(0.0, 3.0, 0.0, 3.0), 3, 3);
  const GridSet cell = GridSet::from_cells(g, {{1, 1}});
  const auto body = dilate(cell, 0.1, 1);
  CHECK(body.inner.empty());
  const auto& og = body.outer.geometry();
  for (int j = 0; j < og.n(); ++j)
    for (int i = 0; i < og.m(); ++i) {
      const Point c = og.cell_center(i, j);
      if (c.x > 1.0 && c.x < 2.0 && c.y > 1.0 && c.y < 2.0) CHECK(body.outer.contains(i, j));
    }
  CHECK(throws_code([&] { dilate(cell, 0.0, 4); }, ErrorCode::InvalidParameter));
  CHECK(throws_code([&] { dilate(cell, 1.0, 0); }, ErrorCode::InvalidParameter));
}

TEST_CASE("dilate: bracket membership matches exact distances and stays row/column convex") {
  const GridGeometry g(Box(0.0, 4.0, 0.0, 4.0), 4, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GridSet l = sample_hv_convex(g, seed, false);
    const auto rects = oracle::rectangles(l);
    for (int refine : {2, 4, 8}) {
      const auto body = dilate(l, 0.7, refine);
      const auto& og = body.outer.geometry();
      const double diag = std::hypot(og.cell_width(), og.cell_height());
      for (int j = 0; j < og.n(); ++j)
        for (int i = 0; i < og.m(); ++i) {
          const double d = oracle::distance_to_rects(rects, og.cell_center(i, j));
          // a cell whose whole square lies within eps must be in outer
          if (d + 0.5 * diag <= 0.7) CHECK(body.outer.contains(i, j));
          // a cell in inner lies entirely within eps
          if (body.inner.contains(i, j)) CHECK(d + 0.5 * diag <= 0.7 + 1e-12);
        }
      for (const GridSet* s : {&body.inner, &body.outer}) {
        if (s->empty()) continue;
        for (int j = 0; j < og.n(); ++j) {
          int runs = 0;
          for (int i = 0; i < og.m(); ++i) runs += s->contains(i, j) && !s->contains_safe(i - 1, j);
          CHECK(runs <= 1);
        }
        for (int i = 0; i < og.m(); ++i) {
          int runs = 0;
          for (int j = 0; j < og.n(); ++j) runs += s->contains(i, j) && !s->contains_safe(i, j - 1);
          CHECK(runs <= 1);
        }
      }
    }
  }
}

TEST_CASE("min_cover") {
  const GridGeometry g(Box(0.0, 2.0, 0.0, 2.0), 2, 2);
  const GridSet diag = picture({"01", "10"});
  CHECK(min_cover(diag, g) == GridSet::full(g));
  CHECK(min_cover(diag, g, CoverContact::Interior) == diag);
  CHECK(min_cover(diag, GridGeometry(g.box(), 1, 1)) == GridSet::full(GridGeometry(g.box(), 1, 1)));

  const GridGeometry fine(Box(0.0, 8.0, 0.0, 8.0), 8, 8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GridSet l = sample_hv_convex(fine, seed, false);
    CHECK(min_cover(l, fine, CoverContact::Interior) == l);
    for (int k : {1, 2, 3, 4, 5}) {
      const GridGeometry coarse(Box(-0.5, 8.5, 0.0, 8.0), k, k + 1);
      const GridSet cover = min_cover(l, coarse);
      CHECK(is_hv_convex(cover));
      CHECK(is_connected(cover));
      // every point of L lies in the cover: test cell centers and corners
      for (const auto& r : oracle::rectangles(l))
        for (Point p : {Point{r.a(), r.c()}, Point{r.b(), r.d()},
                        Point{0.5 * (r.a() + r.b()), 0.5 * (r.c() + r.d())}})
          CHECK(distance_to(cover, p) == 0.0);
      const double diam = std::hypot(coarse.cell_width(), coarse.cell_height());
      CHECK(oracle::hausdorff_sampled(cover, l, 5) <= diam + 1e-12);
    }
  }
  CHECK(throws_code([&] { min_cover(diag, GridGeometry(Box(0.5, 2.0, 0.0, 2.0), 1, 1)); },
                    ErrorCode::CoverageError));
}

TEST_CASE("area") {
  CHECK(area(GridSet::full(GridGeometry(Box(-1.0, 2.0, 0.5, 2.5), 3, 5))) == doctest::Approx(6.0));
  CHECK(area(picture({"1"})) == 1.0);
}

TEST_CASE("sample_hv_convex") {
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 16, 16);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const GridSet s = sample_hv_convex(g, seed, seed % 2 == 0);
    REQUIRE(!s.empty());
    CHECK(is_hv_convex(s));
    CHECK(is_connected(s));
    if (seed % 2 == 0) CHECK(in_level_set(s, g.box()));
  }
  CHECK(sample_hv_convex(g, 99, false) == sample_hv_convex(g, 99, false));
  CHECK_FALSE(sample_hv_convex(g, 99, false) == sample_hv_convex(g, 100, false));
  // small sets are reachable too, not only large blobs
  std::size_t smallest = 256;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    smallest = std::min(smallest, sample_hv_convex(g, seed, false).count());
  CHECK(smallest < 20);
}

TEST_CASE("enumerate_hv_connected matches the brute-force oracle") {
  CHECK(enumerate_hv_connected(GridGeometry(Box(0.0, 1.0, 0.0, 1.0), 1, 1), false).size() == 1);
  CHECK(enumerate_hv_connected(GridGeometry(Box(0.0, 2.0, 0.0, 1.0), 2, 1), false).size() == 3);
  const GridGeometry g22(kUnit2, 2, 2);
  const auto all = enumerate_hv_connected(g22, false);
  CHECK(all == oracle::enumerate_brute(g22, false));
  CHECK(all.size() == 15);
  CHECK(enumerate_hv_connected(g22, true) == oracle::enumerate_brute(g22, true));
  CHECK(enumerate_hv_connected(g22, true).size() == 7);
  const GridGeometry g23(Box(0.0, 2.0, 0.0, 3.0), 2, 3);
  CHECK(enumerate_hv_connected(g23, false) == oracle::enumerate_brute(g23, false));
  const GridGeometry g33(Box(0.0, 3.0, 0.0, 3.0), 3, 3);
  CHECK(enumerate_hv_connected(g33, true) == oracle::enumerate_brute(g33, true));
  CHECK(throws_code([] { enumerate_hv_connected(GridGeometry(kUnit2, 3, 7), false); },
                    ErrorCode::TooLarge));
}

TEST_CASE("every full-box hv-convex set on small grids is connected") {
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      const GridGeometry g(Box(0.0, m, 0.0, n), m, n);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (m * n)); ++mask) {
        const GridSet s = GridSet::from_mask(g, mask);
        if (is_hv_convex(s) && in_level_set(s, g.box())) CHECK(is_connected(s));
      }
    }
}

TEST_CASE("empty sets are rejected where a compact set is required") {
  const GridSet empty(GridGeometry(kUnit2, 2, 2));
  CHECK(empty.empty());
  CHECK(throws_code([&] { dilate(empty, 1.0, 2); }, ErrorCode::InvalidParameter));
  CHECK(throws_code([&] { combine(empty, empty, Rational(1, 2)); }, ErrorCode::InvalidParameter));
}
