#include "hvconic/xray_conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hvconic {

// ---------------------------------------------------------------------------
// XRayProfile

XRayProfile::XRayProfile(SectionAxis axis, std::vector<double> breakpoints,
                         std::vector<double> values)
    : axis_(axis), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2 || values_.size() + 1 != breakpoints_.size()) {
    throw Error(ErrorCode::InvalidParameter,
                "profile needs r+1 breakpoints for r >= 1 interval values");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1]) || !std::isfinite(breakpoints_[k + 1])) {
      throw Error(ErrorCode::InvalidParameter, "profile breakpoints must strictly increase");
    }
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter, "profile values must be finite and >= 0");
    }
  }
  prefix_mass_.assign(breakpoints_.size(), 0.0);
  prefix_moment_.assign(breakpoints_.size(), 0.0);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double lo = breakpoints_[k], hi = breakpoints_[k + 1];
    prefix_mass_[k + 1] = prefix_mass_[k] + values_[k] * (hi - lo);
    prefix_moment_[k + 1] = prefix_moment_[k] + 0.5 * values_[k] * (hi - lo) * (hi + lo);
  }
}

double XRayProfile::operator()(double t) const {
  if (t < breakpoints_.front() || t > breakpoints_.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin());
  // breakpoints_[k-1] <= t < breakpoints_[k]
  if (k == breakpoints_.size()) return values_.back();
  const double here = values_[k - 1];
  if (t == breakpoints_[k - 1] && k >= 2) return std::max(here, values_[k - 2]);
  return here;
}

double XRayProfile::mass_below(double t) const {
  if (t <= breakpoints_.front()) return 0.0;
  if (t >= breakpoints_.back()) return mass();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return prefix_mass_[k] + values_[k] * (t - breakpoints_[k]);
}

XRayProfile XRayProfile::scaled(double factor) const {
  std::vector<double> values = values_;
  for (double& v : values) v *= factor;
  return XRayProfile(axis_, breakpoints_, std::move(values));
}

// ---------------------------------------------------------------------------
// PiecewiseQuadratic

PiecewiseQuadratic::PiecewiseQuadratic(const XRayProfile& profile)
    : breakpoints_(profile.breakpoints()), mass_(profile.mass()) {
  const auto& t = breakpoints_;
  const auto& v = profile.values();
  const auto& prefix = profile.prefix_mass();
  // u(t_0) = sum of v_k * len_k * (mid_k - t_0); every term is >= 0.
  double value = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    value += v[k] * (t[k + 1] - t[k]) * (0.5 * (t[k + 1] + t[k]) - t[0]);
  }
  left_value_ = value;
  pieces_.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Piece piece{value, 2.0 * prefix[k] - mass_, v[k]};
    pieces_.push_back(piece);
    const double len = t[k + 1] - t[k];
    value = piece.c0 + len * (piece.c1 + len * piece.c2);
  }
  right_value_ = value;
}

std::ptrdiff_t PiecewiseQuadratic::locate(double t) const {
  if (t < breakpoints_.front()) return -1;
  if (t >= breakpoints_.back()) return static_cast<std::ptrdiff_t>(pieces_.size());
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return (it - breakpoints_.begin()) - 1;
}

double PiecewiseQuadratic::operator()(double t) const {
  const auto k = locate(t);
  if (k < 0) return left_value_ + (breakpoints_.front() - t) * mass_;
  if (k == static_cast<std::ptrdiff_t>(pieces_.size())) {
    return right_value_ + (t - breakpoints_.back()) * mass_;
  }
  const Piece& p = pieces_[static_cast<std::size_t>(k)];
  const double s = t - breakpoints_[static_cast<std::size_t>(k)];
  return p.c0 + s * (p.c1 + s * p.c2);
}

double PiecewiseQuadratic::slope(double t) const {
  const auto k = locate(t);
  if (k < 0) return -mass_;
  if (k == static_cast<std::ptrdiff_t>(pieces_.size())) return mass_;
  const Piece& p = pieces_[static_cast<std::size_t>(k)];
  return p.c1 + 2.0 * p.c2 * (t - breakpoints_[static_cast<std::size_t>(k)]);
}

double PiecewiseQuadratic::curvature(double t) const {
  const auto k = locate(t);
  if (k < 0 || k == static_cast<std::ptrdiff_t>(pieces_.size())) return 0.0;
  return pieces_[static_cast<std::size_t>(k)].c2;
}

// ---------------------------------------------------------------------------
// ConicEvaluator

namespace {

void check_axes(const XRayProfile& y_profile, const XRayProfile& x_profile) {
  if (y_profile.axis() != SectionAxis::Vertical || x_profile.axis() != SectionAxis::Horizontal) {
    throw Error(ErrorCode::InvalidParameter,
                "conic needs the vertical-section profile first, then the horizontal one");
  }
}

bool same_mass(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ConicEvaluator::ConicEvaluator(const XRayProfile& y_profile, const XRayProfile& x_profile)
    : ConicEvaluator(y_profile, x_profile, y_profile.mass()) {}

ConicEvaluator::ConicEvaluator(const XRayProfile& y_profile, const XRayProfile& x_profile,
                               double mass)
    : u_(y_profile), v_(x_profile), mass_(mass) {
  check_axes(y_profile, x_profile);
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMass, "conic function needs positive mass");
  if (!same_mass(y_profile.mass(), mass) || !same_mass(x_profile.mass(), mass)) {
    throw Error(ErrorCode::InvalidParameter, "the two X-rays must integrate to the same mass");
  }
}

XRayProfile xray_v(const GridSet& set) {
  if (set.empty()) throw Error(ErrorCode::InvalidParameter, "xray: set is empty");
  const auto& g = set.geometry();
  std::vector<double> t(g.m() + 1), v(g.m());
  for (int i = 0; i <= g.m(); ++i) t[i] = g.x_line(i);
  const auto counts = set.column_counts();
  for (int i = 0; i < g.m(); ++i) v[i] = counts[i] * g.cell_height();
  return XRayProfile(SectionAxis::Vertical, std::move(t), std::move(v));
}

XRayProfile xray_h(const GridSet& set) {
  if (set.empty()) throw Error(ErrorCode::InvalidParameter, "xray: set is empty");
  const auto& g = set.geometry();
  std::vector<double> t(g.n() + 1), v(g.n());
  for (int j = 0; j <= g.n(); ++j) t[j] = g.y_line(j);
  const auto counts = set.row_counts();
  for (int j = 0; j < g.n(); ++j) v[j] = counts[j] * g.cell_width();
  return XRayProfile(SectionAxis::Horizontal, std::move(t), std::move(v));
}

ConicEvaluator conic_of(const GridSet& set) {
  return ConicEvaluator(xray_v(set), xray_h(set), area(set));
}

double eval(const ConicEvaluator& conic, double x, double y) {
  return conic.u()(x) + conic.v()(y);
}

std::pair<double, double> grad(const ConicEvaluator& conic, double x, double y) {
  return {conic.u().slope(x), conic.v().slope(y)};
}

namespace {

XRayProfile recover(const PiecewiseQuadratic& q, SectionAxis axis) {
  std::vector<double> values;
  values.reserve(q.pieces().size());
  for (const auto& p : q.pieces()) values.push_back(p.c2);
  return XRayProfile(axis, q.breakpoints(), std::move(values));
}

}  // namespace

std::pair<XRayProfile, XRayProfile> xray_from_conic(const ConicEvaluator& conic) {
  return {recover(conic.u(), SectionAxis::Vertical), recover(conic.v(), SectionAxis::Horizontal)};
}

ConicEvaluator weighted(const ConicEvaluator& conic) {
  const double mass = conic.mass();
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMass, "weighted conic needs positive mass");
  auto [y_profile, x_profile] = xray_from_conic(conic);
  return ConicEvaluator(y_profile.scaled(1.0 / mass), x_profile.scaled(1.0 / mass), 1.0);
}

// ---------------------------------------------------------------------------
// Norms of differences

namespace {

// Partition of [lo, hi] by the breakpoints of both functions.
std::vector<double> merged_partition(const PiecewiseQuadratic& f, const PiecewiseQuadratic& g,
                                     double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (double t : f.breakpoints())
    if (t > lo && t < hi) cuts.push_back(t);
  for (double t : g.breakpoints())
    if (t > lo && t < hi) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

struct Extremes {
  double max = -std::numeric_limits<double>::infinity();
  double min = std::numeric_limits<double>::infinity();
  double argmax = 0.0;
  double argmin = 0.0;

  void add(double t, double value) {
    if (value > max) {
      max = value;
      argmax = t;
    }
    if (value < min) {
      min = value;
      argmin = t;
    }
  }
};

// Max and min of f - g on [lo, hi]: on each piece the difference is a
// quadratic, so endpoints and the interior vertex suffice.
Extremes difference_extremes(const PiecewiseQuadratic& f, const PiecewiseQuadratic& g,
                             double lo, double hi) {
  const auto cuts = merged_partition(f, g, lo, hi);
  Extremes ext;
  auto diff = [&](double t) { return f(t) - g(t); };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k], q = cuts[k + 1];
    ext.add(p, diff(p));
    const double mid = 0.5 * (p + q);
    const double a = f.curvature(mid) - g.curvature(mid);
    const double d = f.slope(p) - g.slope(p);
    if (a != 0.0) {
      const double vertex = p - d / (2.0 * a);
      if (vertex > p && vertex < q) ext.add(vertex, diff(vertex));
    }
  }
  ext.add(cuts.back(), diff(cuts.back()));
  return ext;
}

// Neumaier compensated sum, accumulated in a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct QuadratureCells {
  std::vector<double> width;
  std::vector<double> value;      // difference at the midpoint
  std::vector<double> lipschitz;  // max |difference'| on the cell
};

QuadratureCells quadrature_cells(const PiecewiseQuadratic& f, const PiecewiseQuadratic& g,
                                 double lo, double hi, int refine) {
  const auto cuts = merged_partition(f, g, lo, hi);
  QuadratureCells cells;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k], q = cuts[k + 1];
    const double mid = 0.5 * (p + q);
    const double a = f.curvature(mid) - g.curvature(mid);
    const double d0 = f.slope(p) - g.slope(p);
    const double step = (q - p) / refine;
    for (int r = 0; r < refine; ++r) {
      const double left = p + r * step;
      const double right = r + 1 == refine ? q : p + (r + 1) * step;
      const double w = right - left;
      const double c = 0.5 * (left + right);
      // the derivative of the difference is linear across the piece
      const double dl = d0 + 2.0 * a * (left - p);
      const double dr = d0 + 2.0 * a * (right - p);
      cells.width.push_back(w);
      cells.value.push_back(f(c) - g(c));
      cells.lipschitz.push_back(std::max(std::abs(dl), std::abs(dr)));
    }
  }
  return cells;
}

}  // namespace

SupNorm sup_norm_diff_at(const ConicEvaluator& first, const ConicEvaluator& second,
                         const Box& box) {
  const auto ex = difference_extremes(first.u(), second.u(), box.a(), box.b());
  const auto ey = difference_extremes(first.v(), second.v(), box.c(), box.d());
  const double high = ex.max + ey.max;
  const double low = -(ex.min + ey.min);
  if (high >= low) return {std::max(0.0, high), {ex.argmax, ey.argmax}};
  return {std::max(0.0, low), {ex.argmin, ey.argmin}};
}

double sup_norm_diff(const ConicEvaluator& first, const ConicEvaluator& second, const Box& box) {
  return sup_norm_diff_at(first, second, box).value;
}

DistanceBracket l1_norm_diff(const ConicEvaluator& first, const ConicEvaluator& second,
                             const Box& box, int refine) {
  if (refine < 1) throw Error(ErrorCode::InvalidParameter, "refine must be >= 1");
  const auto xs = quadrature_cells(first.u(), second.u(), box.a(), box.b(), refine);
  const auto ys = quadrature_cells(first.v(), second.v(), box.c(), box.d(), refine);

  CompensatedSum integral;
  for (std::size_t j = 0; j < ys.width.size(); ++j) {
    for (std::size_t i = 0; i < xs.width.size(); ++i) {
      integral.add(xs.width[i] * ys.width[j] * std::abs(xs.value[i] + ys.value[j]));
    }
  }
  // Midpoint error on a w x h cell is at most w*h*(Lx*w + Ly*h)/4.
  CompensatedSum wx, wy, ex, ey;
  for (std::size_t i = 0; i < xs.width.size(); ++i) {
    wx.add(xs.width[i]);
    ex.add(xs.lipschitz[i] * xs.width[i] * xs.width[i]);
  }
  for (std::size_t j = 0; j < ys.width.size(); ++j) {
    wy.add(ys.width[j]);
    ey.add(ys.lipschitz[j] * ys.width[j] * ys.width[j]);
  }
  const double error = 0.25 * (ex.value() * wy.value() + wx.value() * ey.value());
  const double q = integral.value();
  return {std::max(0.0, q - error), q + error};
}

bool xrays_equal_ae(const GridSet& first, const GridSet& second) {
  if (!(first.geometry() == second.geometry())) {
    throw Error(ErrorCode::GeometryMismatch, "X-ray comparison needs a shared geometry");
  }
  return first.column_counts() == second.column_counts() &&
         first.row_counts() == second.row_counts();
}

}  // namespace hvconic
