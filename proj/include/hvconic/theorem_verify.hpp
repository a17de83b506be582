#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hvconic/grid_geometry.hpp"
#include "hvconic/metrics.hpp"
#include "hvconic/xray_conic.hpp"

namespace hvconic {

/// Outcome of one checker run. margin is bound minus measured in absolute
/// units; holds == (margin >= -bracket_error). A structural failure (a
/// predicate rather than an inequality) is reported as margin = -inf.
struct CheckReport {
  std::string name;
  bool holds = false;
  double margin = 0.0;
  double bracket_error = 0.0;
  std::optional<std::string> witness;
  std::string inputs_digest;
};

/// Sample lattice for pointwise checks: nx x ny points spanning the box.
struct LatticeSpec {
  int nx = 33;
  int ny = 33;
};

/// Concavity of the X-rays and of f under Minkowski combination. Both sets
/// must fill the reference box projections.
CheckReport check_concavity(const GridSet& first, const GridSet& second, const Rational& t,
                            const LatticeSpec& lattice = {});

/// area(t L1 + (1-t) L2) >= t area(L1) + (1-t) area(L2), in exact cell units.
CheckReport check_area_superadditivity(const GridSet& first, const GridSet& second,
                                       const Rational& t);

/// The mismatched-box counterexample: [-3,3]^2 and [-1,1]^2 at t = 1/2.
/// Expected to report holds = false.
CheckReport reproduce_remark2();

/// Dilation excess bound 2 k eps with k the perimeter of bounding_box(L).
CheckReport check_dilation_bound(const GridSet& set, double eps, int refine = 8);

/// |f_L - f_K| <= (k/2 + 2r) 2 k r over the reference box.
CheckReport check_stability_bound(const GridSet& k, const GridSet& l,
                                  int subsamples = kDefaultSubsamples);

struct ConvergenceStep {
  GridSet cover;
  bool hv_connected = false;
  DistanceBracket hausdorff;  // nesting-tightened upper end
  double sup_norm = 0.0;
  double envelope = 0.0;
};

/// Minimal coverings of L on each resolution, with the quantities checked
/// by check_convergence.
std::vector<ConvergenceStep> convergence_steps(const GridSet& set,
                                               const std::vector<GridGeometry>& resolutions,
                                               int subsamples = kDefaultSubsamples);

CheckReport check_convergence(const GridSet& set, const std::vector<GridGeometry>& resolutions,
                              int subsamples = kDefaultSubsamples);

inline constexpr int kPolylineRefine = 160;

/// Tube area bound 2 l eps + pi eps^2 (2 l eps for closed chains).
CheckReport check_polyline_bound(const Polyline& chain, double eps,
                                 int refine = kPolylineRefine);

/// One JSON object on a single line, newline not included.
std::string to_json_line(const CheckReport& report);

}  // namespace hvconic
