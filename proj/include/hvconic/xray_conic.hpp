#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hvconic/grid_geometry.hpp"
#include "hvconic/metrics.hpp"

namespace hvconic {

/// Which sections a profile measures. Vertical sections give Y_K(x), a
/// function of x; horizontal sections give X_K(y), a function of y.
enum class SectionAxis { Vertical, Horizontal };

/// Piecewise-constant coordinate X-ray: value v_k on [t_k, t_{k+1}], zero
/// outside [t_0, t_r]. Prefix mass M_k and first moment S_k up to t_k are
/// precomputed.
class XRayProfile {
 public:
  XRayProfile(SectionAxis axis, std::vector<double> breakpoints, std::vector<double> values);

  SectionAxis axis() const { return axis_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& prefix_mass() const { return prefix_mass_; }
  const std::vector<double>& prefix_moment() const { return prefix_moment_; }
  double mass() const { return prefix_mass_.back(); }

  /// Section length at t. At a breakpoint the larger neighbouring value is
  /// returned (upper semicontinuous representative).
  double operator()(double t) const;

  /// Mass to the left of t: integral of the profile over (-inf, t].
  double mass_below(double t) const;

  XRayProfile scaled(double factor) const;

  friend bool operator==(const XRayProfile& l, const XRayProfile& r) {
    return l.axis_ == r.axis_ && l.breakpoints_ == r.breakpoints_ && l.values_ == r.values_;
  }

 private:
  SectionAxis axis_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> prefix_mass_;
  std::vector<double> prefix_moment_;
};

/// u(t) = integral |t - s| v(s) ds for a piecewise-constant v >= 0: convex,
/// quadratic on each breakpoint interval and linear outside. Piece k is
/// stored in local form c0 + c1 s + c2 s^2 with s = t - t_k; c2 equals the
/// profile value exactly.
class PiecewiseQuadratic {
 public:
  struct Piece {
    double c0, c1, c2;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  explicit PiecewiseQuadratic(const XRayProfile& profile);

  double operator()(double t) const;
  /// Right derivative.
  double slope(double t) const;
  /// Half the second derivative of the piece containing t (0 outside).
  double curvature(double t) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  double mass() const { return mass_; }

  friend bool operator==(const PiecewiseQuadratic&, const PiecewiseQuadratic&) = default;

 private:
  // Index of the piece with t_k <= t < t_{k+1}, or -1 / size() outside.
  std::ptrdiff_t locate(double t) const;

  std::vector<double> breakpoints_;
  std::vector<Piece> pieces_;
  double mass_;
  double left_value_;
  double right_value_;
};

/// Exact generalized conic function f(x, y) = u(x) + v(y) of a focal set,
/// built from its coordinate X-rays.
class ConicEvaluator {
 public:
  /// Mass is taken from the profiles, which must agree on it.
  ConicEvaluator(const XRayProfile& y_profile, const XRayProfile& x_profile);
  ConicEvaluator(const XRayProfile& y_profile, const XRayProfile& x_profile, double mass);

  double mass() const { return mass_; }
  const PiecewiseQuadratic& u() const { return u_; }
  const PiecewiseQuadratic& v() const { return v_; }

  friend bool operator==(const ConicEvaluator&, const ConicEvaluator&) = default;

 private:
  PiecewiseQuadratic u_;
  PiecewiseQuadratic v_;
  double mass_;
};

/// Y_L: vertical section lengths as a function of x.
XRayProfile xray_v(const GridSet& set);
/// X_L: horizontal section lengths as a function of y.
XRayProfile xray_h(const GridSet& set);

ConicEvaluator conic_of(const GridSet& set);

double eval(const ConicEvaluator& conic, double x, double y);

/// (df/dx, df/dy) using right derivatives at breakpoints.
std::pair<double, double> grad(const ConicEvaluator& conic, double x, double y);

/// (Y, X) recovered from the stored second-order coefficients.
std::pair<XRayProfile, XRayProfile> xray_from_conic(const ConicEvaluator& conic);

/// f / mass, renormalized to unit mass.
ConicEvaluator weighted(const ConicEvaluator& conic);

struct SupNorm {
  double value = 0.0;
  Point witness;
};

/// Exact sup over the box of |f1 - f2|, with a point where it is attained.
SupNorm sup_norm_diff_at(const ConicEvaluator& first, const ConicEvaluator& second,
                         const Box& box);
double sup_norm_diff(const ConicEvaluator& first, const ConicEvaluator& second, const Box& box);

/// Integral over the box of |f1 - f2|, midpoint quadrature on the breakpoint
/// product partition refined refine times, with a Lipschitz error bound.
DistanceBracket l1_norm_diff(const ConicEvaluator& first, const ConicEvaluator& second,
                             const Box& box, int refine);

/// Equal column sums and equal row sums (exact integer comparison).
bool xrays_equal_ae(const GridSet& first, const GridSet& second);

}  // namespace hvconic
