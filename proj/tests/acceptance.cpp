// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure or time-budget overrun.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hvconic/random.hpp"
#include "hvconic/reconstruct.hpp"
#include "hvconic/theorem_verify.hpp"
#include "hvconic/workloads.hpp"
#include "oracles.hpp"

using namespace hvconic;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

GridSet random_set(const GridGeometry& g, Rng& rng) {
  for (;;) {
    std::vector<std::uint8_t> cells(g.cell_count());
    for (auto& c : cells) c = rng.bernoulli(0.4);
    GridSet s(g, std::move(cells));
    if (!s.empty()) return s;
  }
}

Outcome remark2_counterexample() {
  Outcome o;
  const CheckReport r = reproduce_remark2();
  const GridGeometry g(Box(-3.0, 3.0, -3.0, 3.0), 6, 6);
  const GridSet big = GridSet::full(g);
  const GridSet small = GridSet::from_cells(g, {{2, 2}, {3, 2}, {2, 3}, {3, 3}});
  const GridSet mixed = combine(big, small, Rational(1, 2));
  // [-2,2]^2 on the doubled grid is the middle 8x8 block
  std::size_t inside = 0;
  for (const auto& [i, j] : mixed.occupied()) inside += (i >= 2 && i < 10 && j >= 2 && j < 10);
  const bool square = mixed.count() == 64 && inside == 64;
  const bool areas = area(mixed) == 16.0 && 0.5 * area(big) + 0.5 * area(small) == 20.0;
  o.pass = !r.holds && r.margin == -4.0 && square && areas;
  o.detail = "area(combine) = " + std::to_string(area(mixed)) + " vs 20, margin " +
             std::to_string(r.margin);
  return o;
}

Outcome concavity_suite() {
  Outcome o;
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 8, 8);
  int checks = 0, failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < 200; ++k) {
    const GridSet a = sample_hv_convex(g, 2 * k, true);
    const GridSet b = sample_hv_convex(g, 2 * k + 1, true);
    for (const Rational t : {Rational(1, 2), Rational(1, 3), Rational(2, 3)}) {
      const CheckReport r = check_concavity(a, b, t, LatticeSpec{33, 33});
      ++checks;
      if (!r.holds || r.margin < 0.0) ++failures;
      worst = std::min(worst, r.margin);
    }
  }
  o.pass = failures == 0;
  o.detail = std::to_string(checks - failures) + "/" + std::to_string(checks) +
             " hold, min margin " + std::to_string(worst);
  return o;
}

Outcome stability_suite() {
  Outcome o;
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 8, 8);
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < 500; ++k) {
    const CheckReport r = check_stability_bound(sample_hv_convex(g, 2 * k, false),
                                                sample_hv_convex(g, 2 * k + 1, false), 4);
    if (!r.holds) ++failures;
    worst = std::min(worst, r.margin);
  }
  o.pass = failures == 0;
  o.detail = std::to_string(500 - failures) + "/500 hold, min margin " + std::to_string(worst);
  return o;
}

Outcome dilation_suite() {
  Outcome o;
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 8, 8);
  const double scale = std::min(g.cell_width(), g.cell_height()) * std::min(g.m(), g.n());
  int checks = 0, failures = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const GridSet s = sample_hv_convex(g, k, true);
    for (double f : {0.05, 0.1, 0.25}) {
      ++checks;
      if (!check_dilation_bound(s, f * scale, 8).holds) ++failures;
    }
  }
  bool steiner = true;
  const GridSet full = GridSet::full(g);
  for (double f : {0.05, 0.1, 0.25}) {
    const double eps = f * scale;
    const double exact = oracle::steiner_rectangle(1.0, 1.0, eps) - 1.0;
    const auto body = dilate(full, eps, 8);
    steiner = steiner && area(body.inner) - 1.0 <= exact && exact <= area(body.outer) - 1.0;
  }
  o.pass = failures == 0 && steiner;
  o.detail = std::to_string(checks - failures) + "/" + std::to_string(checks) +
             " hold, full-box excess bracketed: " + (steiner ? "yes" : "no");
  return o;
}

Outcome tube_suite() {
  Outcome o;
  const double eps = 0.1;
  const Polyline seg({{0.0, 0.0}, {1.0, 0.0}}, false);
  const CheckReport rs = check_polyline_bound(seg, eps);
  const bool segment = rs.holds && std::abs(rs.margin) <= rs.bracket_error;

  const Polyline square({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
  const auto tube = tube_area(square, eps, kPolylineRefine);
  const double analytic = (1.2 * 1.2 - 4 * eps * eps + std::numbers::pi * eps * eps) - 0.8 * 0.8;
  const bool sq = tube.contains(analytic) && std::abs(analytic - 0.7914) < 5e-5 &&
                  check_polyline_bound(square, eps).holds;

  int failures = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const bool closed = k % 2 == 1;
    const Polyline chain = random_simple_polyline(k, closed, closed ? 6 : 5, 2.0 * eps);
    if (!check_polyline_bound(chain, eps).holds) ++failures;
  }
  o.pass = segment && sq && failures == 0;
  o.detail = "segment " + std::string(segment ? "ok" : "bad") + ", square tube [" +
             std::to_string(tube.lower) + ", " + std::to_string(tube.upper) + "] vs 0.8, " +
             std::to_string(50 - failures) + "/50 chains hold";
  return o;
}

Outcome conic_identities() {
  Outcome o;
  Rng rng(2024);
  int bad_round = 0, bad_grad = 0;
  for (int k = 0; k < 100; ++k) {
    const GridGeometry g(Box(rng.uniform(-2, 0), rng.uniform(1, 3), rng.uniform(-2, 0),
                             rng.uniform(1, 3)),
                         rng.uniform_int(1, 8), rng.uniform_int(1, 8));
    const GridSet s = random_set(g, rng);
    const ConicEvaluator f = conic_of(s);
    const auto [y, x] = xray_from_conic(f);
    const auto ty = xray_v(s), tx = xray_h(s);
    bool same = y.breakpoints() == ty.breakpoints() && x.breakpoints() == tx.breakpoints();
    for (std::size_t i = 0; same && i < ty.values().size(); ++i)
      same = rel_diff(y.values()[i], ty.values()[i]) <= 1e-12;
    for (std::size_t i = 0; same && i < tx.values().size(); ++i)
      same = rel_diff(x.values()[i], tx.values()[i]) <= 1e-12;
    if (!same) ++bad_round;

    for (int p = 0; p < 10; ++p) {
      const int i = rng.uniform_int(0, g.m() - 1), j = rng.uniform_int(0, g.n() - 1);
      const double hx = g.cell_width() / 4, hy = g.cell_height() / 4;
      const double px = g.x_line(i) + rng.uniform(hx, 3 * hx);
      const double py = g.y_line(j) + rng.uniform(hy, 3 * hy);
      const double h = std::min(hx, hy) / 2;
      const auto [gx, gy] = grad(f, px, py);
      const double cx = (eval(f, px + h, py) - eval(f, px - h, py)) / (2 * h);
      const double cy = (eval(f, px, py + h) - eval(f, px, py - h)) / (2 * h);
      const double scale = std::max({1.0, std::abs(gx), std::abs(gy), f.mass()});
      if (std::abs(gx - cx) > 1e-9 * scale || std::abs(gy - cy) > 1e-9 * scale) ++bad_grad;
    }
  }
  const ConicEvaluator cell = conic_of(oracle::picture({"1"}));
  const ConicEvaluator domino = conic_of(oracle::picture({"11"}));
  const bool values = std::abs(eval(cell, 0.5, 0.5) - 0.5) <= 1e-12 &&
                      std::abs(eval(cell, 2.0, 0.5) - 1.75) <= 1e-12 &&
                      std::abs(eval(domino, 1.0, 0.5) - 1.5) <= 1e-12;
  o.pass = bad_round == 0 && bad_grad == 0 && values;
  o.detail = std::to_string(100 - bad_round) + "/100 round trips, " + std::to_string(bad_grad) +
             " gradient mismatches, analytic values " + (values ? "ok" : "bad");
  return o;
}

Outcome convergence_suite() {
  Outcome o;
  const GridGeometry g(Box(0.0, 1.0, 0.0, 1.0), 16, 16);
  const auto res = halving_resolutions(g);
  int failures = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const GridSet s = sample_hv_convex(g, k, false);
    const auto steps = convergence_steps(s, res);
    bool ok = check_convergence(s, res).holds;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      ok = ok && steps[i].hv_connected && steps[i].sup_norm <= steps[i].envelope;
      if (i > 0) ok = ok && steps[i].hausdorff.upper <= steps[i - 1].hausdorff.upper;
    }
    ok = ok && steps.back().hausdorff.upper == 0.0 && steps.back().sup_norm == 0.0;
    if (!ok) ++failures;
  }
  o.pass = failures == 0;
  o.detail = std::to_string(20 - failures) + "/20 sequences decay to 0 within the envelope";
  return o;
}

Outcome reconstruction_suite() {
  Outcome o;
  const GridGeometry g2(Box(0.0, 2.0, 0.0, 2.0), 2, 2);
  const auto targets = enumerate_hv_connected(g2, false);
  bool classes = targets.size() == 15;
  std::size_t diag_optima = 0;
  for (const auto& t : targets) {
    const auto r = exhaustive(ReconstructionProblem(conic_of(t), g2));
    std::vector<GridSet> expected;
    for (const auto& s : targets)
      if (xrays_equal_ae(s, t)) expected.push_back(s);
    classes = classes && r.objective == 0.0 && r.optima == expected;
    if (t == GridSet::from_cells(g2, {{0, 1}, {1, 0}})) diag_optima = r.optima.size();
  }

  const GridGeometry g4(Box(0.0, 1.0, 0.0, 1.0), 4, 4);
  int successes = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const GridSet generator = sample_hv_convex(g4, 1000 + k, false);
    const ReconstructionProblem p(conic_of(generator), g4);
    const auto oracle_result = exhaustive(p);
    AnnealingParams params;
    params.steps = 20000;
    params.restarts = 3;
    params.seed = k;
    const auto r = local_search(p, params);
    const bool found = oracle_result.objective == 0.0 && r.objective == 0.0 &&
                       xrays_equal_ae(r.best, generator) &&
                       std::find(oracle_result.optima.begin(), oracle_result.optima.end(),
                                 r.best) != oracle_result.optima.end();
    if (found) ++successes;
  }
  o.pass = classes && diag_optima == 2 && successes >= 95;
  o.detail = std::string("2x2 classes ") + (classes ? "match" : "differ") +
             ", diagonal optima " + std::to_string(diag_optima) + ", 4x4 " +
             std::to_string(successes) + "/100 reach 0";
  return o;
}

Outcome full_projection_connected() {
  Outcome o;
  long long examined = 0, exceptions = 0;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      const GridGeometry g(Box(0.0, m, 0.0, n), m, n);
      const std::uint64_t limit = std::uint64_t{1} << g.cell_count();
      for (std::uint64_t mask = 1; mask < limit; ++mask) {
        const GridSet s = GridSet::from_mask(g, mask);
        if (!in_level_set(s, g.box()) || !is_hv_convex(s)) continue;
        ++examined;
        if (!is_connected(s)) ++exceptions;
      }
    }
  o.pass = exceptions == 0 && examined > 0;
  o.detail = std::to_string(examined) + " sets, " + std::to_string(exceptions) + " exceptions";
  return o;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"mismatched-box counterexample", 1.0, remark2_counterexample},
      {"concavity under Minkowski combination", 30.0, concavity_suite},
      {"stability bound", 120.0, stability_suite},
      {"dilation bound", 120.0, dilation_suite},
      {"tube area bound", 60.0, tube_suite},
      {"exact conic identities", 60.0, conic_identities},
      {"convergence of minimal coverings", 120.0, convergence_suite},
      {"reconstruction against the oracle", 300.0, reconstruction_suite},
      {"full projections imply connected", 60.0, full_projection_connected},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %zu %s: %s (%.2fs, budget %.0fs%s)\n", pass ? "PASS" : "FAIL", k + 1, c.name,
                o.detail.c_str(), seconds, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
