#include "hvconic/theorem_verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "hvconic/formats.hpp"

namespace hvconic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckReport make_report(std::string name, double margin, double bracket_error,
                        std::optional<std::string> witness, std::string digest) {
  CheckReport r;
  r.name = std::move(name);
  r.margin = margin;
  r.bracket_error = bracket_error;
  r.holds = margin >= -bracket_error;
  r.witness = std::move(witness);
  r.inputs_digest = std::move(digest);
  return r;
}

std::string point_text(double x, double y) {
  return "(" + format_double(x) + ", " + format_double(y) + ")";
}

std::string rational_text(const Rational& t) {
  return std::to_string(t.num()) + "/" + std::to_string(t.den());
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::PreconditionViolated, message);
}

void require_hv_connected(const GridSet& set, const char* what) {
  require(!set.empty(), std::string(what) + " is empty");
  require(is_hv_convex(set), std::string(what) + " is not hv-convex");
  require(is_connected(set), std::string(what) + " is not connected");
}

// integral over [lo, hi] of |x - s| ds
double abs_moment(double x, double lo, double hi) {
  if (x <= lo) return (hi - lo) * (0.5 * (lo + hi) - x);
  if (x >= hi) return (hi - lo) * (x - 0.5 * (lo + hi));
  return 0.5 * ((x - lo) * (x - lo) + (hi - x) * (hi - x));
}

double lattice_coordinate(double lo, double hi, int count, int k) {
  if (count == 1) return 0.5 * (lo + hi);
  if (k == count - 1) return hi;
  return lo + (hi - lo) * k / (count - 1);
}

double envelope(double perimeter, double r) {
  return (0.5 * perimeter + 2.0 * r) * 2.0 * perimeter * r;
}

// Slack t*L1 + (1-t)*L2 -> combine, per refined column or row, in refined
// cell counts: countC - p*c1 - (q-p)*c2.
std::vector<std::int64_t> profile_slack(const std::vector<int>& combined,
                                        const std::vector<int>& first,
                                        const std::vector<int>& second, const Rational& t) {
  const std::int64_t p = t.num(), q = t.den();
  std::vector<std::int64_t> out(combined.size());
  for (std::size_t k = 0; k < combined.size(); ++k) {
    const std::size_t coarse = k / static_cast<std::size_t>(q);
    out[k] = combined[k] - p * first[coarse] - (q - p) * second[coarse];
  }
  return out;
}

}  // namespace

CheckReport check_concavity(const GridSet& first, const GridSet& second, const Rational& t,
                            const LatticeSpec& lattice) {
  if (!(first.geometry() == second.geometry())) {
    throw Error(ErrorCode::GeometryMismatch, "concavity check needs a common geometry");
  }
  if (lattice.nx < 1 || lattice.ny < 1) {
    throw Error(ErrorCode::InvalidParameter, "lattice must have at least one point per axis");
  }
  const Box& box = first.geometry().box();
  require(!first.empty() && in_level_set(first, box), "L1 does not fill the reference box");
  require(!second.empty() && in_level_set(second, box), "L2 does not fill the reference box");

  const GridSet combined = combine(first, second, t);
  const GridGeometry& rg = combined.geometry();
  const auto slack_y = profile_slack(combined.column_counts(), first.column_counts(),
                                     second.column_counts(), t);
  const auto slack_x =
      profile_slack(combined.row_counts(), first.row_counts(), second.row_counts(), t);

  // Difference profiles in length units; their signs are exact.
  std::vector<double> dy(slack_y.size()), dx(slack_x.size());
  double margin = kInf;
  std::string witness;
  for (std::size_t k = 0; k < slack_y.size(); ++k) {
    dy[k] = static_cast<double>(slack_y[k]) * rg.cell_height();
    if (dy[k] < margin) {
      margin = dy[k];
      witness = "Y at x in [" + format_double(rg.x_line(static_cast<int>(k))) + ", " +
                format_double(rg.x_line(static_cast<int>(k) + 1)) + "]";
    }
  }
  for (std::size_t k = 0; k < slack_x.size(); ++k) {
    dx[k] = static_cast<double>(slack_x[k]) * rg.cell_width();
    if (dx[k] < margin) {
      margin = dx[k];
      witness = "X at y in [" + format_double(rg.y_line(static_cast<int>(k))) + ", " +
                format_double(rg.y_line(static_cast<int>(k) + 1)) + "]";
    }
  }

  const ConicEvaluator fc = conic_of(combined);
  const ConicEvaluator f1 = conic_of(first);
  const ConicEvaluator f2 = conic_of(second);
  const double tv = t.value();
  const double scale = std::max(1.0, (fc.mass() + f1.mass() + f2.mass()) *
                                         (box.width() + box.height()));
  const double rounding = 1e-12 * scale;
  double worst_direct = kInf;
  std::string direct_witness;
  for (int jy = 0; jy < lattice.ny; ++jy) {
    const double y = lattice_coordinate(box.c(), box.d(), lattice.ny, jy);
    for (int ix = 0; ix < lattice.nx; ++ix) {
      const double x = lattice_coordinate(box.a(), box.b(), lattice.nx, ix);
      double slack = 0.0;
      for (std::size_t k = 0; k < dy.size(); ++k) {
        if (dy[k] != 0.0) {
          slack += dy[k] * abs_moment(x, rg.x_line(static_cast<int>(k)),
                                      rg.x_line(static_cast<int>(k) + 1));
        }
      }
      for (std::size_t k = 0; k < dx.size(); ++k) {
        if (dx[k] != 0.0) {
          slack += dx[k] * abs_moment(y, rg.y_line(static_cast<int>(k)),
                                      rg.y_line(static_cast<int>(k) + 1));
        }
      }
      if (slack < margin) {
        margin = slack;
        witness = "f at " + point_text(x, y);
      }
      const double direct = eval(fc, x, y) - tv * eval(f1, x, y) - (1.0 - tv) * eval(f2, x, y);
      if (direct < worst_direct) {
        worst_direct = direct;
        direct_witness = "f (direct) at " + point_text(x, y);
      }
    }
  }
  // Direct evaluation is a cross-check; it only counts once it leaves the
  // rounding allowance.
  if (worst_direct < -rounding && worst_direct < margin) {
    margin = worst_direct;
    witness = direct_witness;
  }

  const std::string digest =
      fnv1a_hex("concavity\n" + write_hvset(first) + write_hvset(second) + rational_text(t) +
                " " + std::to_string(lattice.nx) + "x" + std::to_string(lattice.ny));
  return make_report("concavity", margin, rounding, witness, digest);
}

namespace {

CheckReport superadditivity_report(const GridSet& first, const GridSet& second,
                                   const Rational& t, const std::string& name) {
  const GridSet combined = combine(first, second, t);
  const std::int64_t p = t.num(), q = t.den();
  // Everything in refined cell areas (cell area / q^2).
  const auto c = static_cast<std::int64_t>(combined.count());
  const auto a1 = static_cast<std::int64_t>(first.count());
  const auto a2 = static_cast<std::int64_t>(second.count());
  const std::int64_t bound_units = p * q * a1 + (q - p) * q * a2;
  const std::int64_t slack = c - bound_units;
  const double refined_area = combined.geometry().cell_width() * combined.geometry().cell_height();
  const double margin = static_cast<double>(slack) * refined_area;
  const std::string witness = "area(combine) = " + format_double(static_cast<double>(c) * refined_area) +
                              ", t*area(L1) + (1-t)*area(L2) = " +
                              format_double(static_cast<double>(bound_units) * refined_area);
  const std::string digest =
      fnv1a_hex(name + "\n" + write_hvset(first) + write_hvset(second) + rational_text(t));
  return make_report(name, margin, 0.0, witness, digest);
}

}  // namespace

CheckReport check_area_superadditivity(const GridSet& first, const GridSet& second,
                                       const Rational& t) {
  if (!(first.geometry() == second.geometry())) {
    throw Error(ErrorCode::GeometryMismatch, "superadditivity check needs a common geometry");
  }
  const Box& box = first.geometry().box();
  require(!first.empty() && in_level_set(first, box), "L1 does not fill the reference box");
  require(!second.empty() && in_level_set(second, box), "L2 does not fill the reference box");
  return superadditivity_report(first, second, t, "superadditivity");
}

CheckReport reproduce_remark2() {
  const GridGeometry g(Box(-3.0, 3.0, -3.0, 3.0), 6, 6);
  const GridSet big = GridSet::full(g);
  std::vector<std::uint8_t> cells(g.cell_count(), 0);
  for (int j = 2; j <= 3; ++j)
    for (int i = 2; i <= 3; ++i) cells[static_cast<std::size_t>(j) * 6 + i] = 1;
  const GridSet small(g, std::move(cells));
  return superadditivity_report(big, small, Rational(1, 2), "remark2");
}

CheckReport check_dilation_bound(const GridSet& set, double eps, int refine) {
  require_hv_connected(set, "L");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::PreconditionViolated, "dilation radius must be positive");
  }
  const double k = bounding_box(set).perimeter();
  const DilationBracket body = dilate(set, eps, refine);
  const double base = area(set);
  const double outer = area(body.outer);
  const double inner = area(body.inner);
  const double margin = 2.0 * k * eps - (outer - base);
  const std::string witness = "excess in [" + format_double(inner - base) + ", " +
                              format_double(outer - base) + "], 2k eps = " +
                              format_double(2.0 * k * eps);
  const std::string digest = fnv1a_hex("dilation\n" + write_hvset(set) + format_double(eps) +
                                       " " + std::to_string(refine));
  return make_report("dilation", margin, outer - inner, witness, digest);
}

CheckReport check_stability_bound(const GridSet& k, const GridSet& l, int subsamples) {
  require_hv_connected(k, "K");
  require_hv_connected(l, "L");
  const Box& box = k.geometry().box();
  require(in_sublevel_set(l, box), "L is not inside the reference box of K");
  const double perimeter = box.perimeter();
  const DistanceBracket r = hausdorff(k, l, subsamples);
  const SupNorm measured = sup_norm_diff_at(conic_of(k), conic_of(l), box);
  const double bound = envelope(perimeter, r.upper);
  const double margin = bound - measured.value;
  const std::string witness = "sup at " + point_text(measured.witness.x, measured.witness.y) +
                              ", H in [" + format_double(r.lower) + ", " +
                              format_double(r.upper) + "], margin at H lower = " +
                              format_double(envelope(perimeter, r.lower) - measured.value);
  const std::string digest = fnv1a_hex("stability\n" + write_hvset(k) + write_hvset(l) +
                                       std::to_string(subsamples));
  return make_report("stability", margin, 0.0, witness, digest);
}

std::vector<ConvergenceStep> convergence_steps(const GridSet& set,
                                               const std::vector<GridGeometry>& resolutions,
                                               int subsamples) {
  require_hv_connected(set, "L");
  require(!resolutions.empty(), "no resolutions given");
  const Box& box = set.geometry().box();
  for (std::size_t s = 0; s < resolutions.size(); ++s) {
    require(resolutions[s].box() == box, "resolution box differs from the reference box");
    if (s == 0) continue;
    const auto& prev = resolutions[s - 1];
    const auto& cur = resolutions[s];
    require(cur.m() % prev.m() == 0 && cur.n() % prev.n() == 0 &&
                (cur.m() > prev.m() || cur.n() > prev.n()),
            "resolutions are not strictly refining");
  }

  const ConicEvaluator target = conic_of(set);
  const double perimeter = box.perimeter();
  std::vector<ConvergenceStep> steps;
  double running_upper = kInf;
  for (const auto& resolution : resolutions) {
    ConvergenceStep step{min_cover(set, resolution, CoverContact::Interior), false, {}, 0.0, 0.0};
    step.hv_connected = is_hv_convex(step.cover) && is_connected(step.cover);
    step.hausdorff = hausdorff(step.cover, set, subsamples);
    // Coverings on refining grids are nested, so H is non-increasing and an
    // earlier upper end stays valid.
    running_upper = std::min(running_upper, step.hausdorff.upper);
    step.hausdorff.upper = running_upper;
    step.hausdorff.lower = std::min(step.hausdorff.lower, running_upper);
    step.sup_norm = sup_norm_diff(conic_of(step.cover), target, box);
    step.envelope = envelope(perimeter, step.hausdorff.upper);
    steps.push_back(std::move(step));
  }
  return steps;
}

CheckReport check_convergence(const GridSet& set, const std::vector<GridGeometry>& resolutions,
                              int subsamples) {
  const auto steps = convergence_steps(set, resolutions, subsamples);
  const ConicEvaluator target = conic_of(set);
  const Box& box = set.geometry().box();
  const double rounding = 1e-12 * std::max(1.0, 2.0 * box.area() * (box.width() + box.height()));

  double margin = kInf;
  std::string witness;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const auto& st = steps[s];
    const std::string where = "step " + std::to_string(s) + " (" +
                              std::to_string(st.cover.m()) + "x" + std::to_string(st.cover.n()) +
                              ")";
    if (!st.hv_connected) {
      margin = -kInf;
      witness = where + ": covering is not hv-convex and connected";
      break;
    }
    if (s > 0 && st.sup_norm > steps[s - 1].sup_norm + rounding) {
      margin = -kInf;
      witness = where + ": sup-norm difference increased";
      break;
    }
    const double slack = st.envelope - st.sup_norm;
    if (slack < margin) {
      margin = slack;
      witness = where;
    }
  }

  std::string text = "convergence\n" + write_hvset(set) + std::to_string(subsamples);
  for (const auto& g : resolutions) text += " " + std::to_string(g.m()) + "x" + std::to_string(g.n());
  return make_report("convergence", margin, 0.0, witness, fnv1a_hex(text));
}

CheckReport check_polyline_bound(const Polyline& chain, double eps, int refine) {
  if (!chain.is_simple()) throw Error(ErrorCode::NonSimpleChain, "polygonal chain is not simple");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::PreconditionViolated, "tube radius must be positive");
  }
  const double l = chain.length();
  const double bound =
      chain.closed() ? 2.0 * l * eps : 2.0 * l * eps + std::numbers::pi * eps * eps;
  const DistanceBracket tube = tube_area(chain, eps, refine);
  const double margin = bound - tube.upper;
  const std::string witness = "tube area in [" + format_double(tube.lower) + ", " +
                              format_double(tube.upper) + "], bound = " + format_double(bound);
  const std::string digest = fnv1a_hex("polyline\n" + write_polyline(chain) + format_double(eps) +
                                       " " + std::to_string(refine));
  return make_report("polyline", margin, tube.width(), witness, digest);
}

std::string to_json_line(const CheckReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["holds"] = report.holds;
  j["margin"] = std::isfinite(report.margin) ? nlohmann::json(report.margin) : nlohmann::json();
  j["bracket_error"] = report.bracket_error;
  j["witness"] = report.witness ? nlohmann::json(*report.witness) : nlohmann::json();
  j["inputs_digest"] = report.inputs_digest;
  return j.dump();
}

}  // namespace hvconic
