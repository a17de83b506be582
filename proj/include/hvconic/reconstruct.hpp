#pragma once

#include <cstdint>
#include <vector>

#include "hvconic/grid_geometry.hpp"
#include "hvconic/xray_conic.hpp"

namespace hvconic {

enum class NormKind { Sup, L1 };

struct ObjectiveNorm {
  NormKind kind = NormKind::Sup;
  int l1_refine = 4;
};

enum class Feasibility { HvConnected, HvConnectedFullBox };

/// Minimize ||f_L - target|| over feasible grid sets on geometry. Norms are
/// taken over the geometry's box.
class ReconstructionProblem {
 public:
  ReconstructionProblem(ConicEvaluator target, GridGeometry geometry, ObjectiveNorm norm = {},
                        Feasibility feasibility = Feasibility::HvConnected);

  const ConicEvaluator& target() const { return target_; }
  const GridGeometry& geometry() const { return geometry_; }
  const ObjectiveNorm& norm() const { return norm_; }
  Feasibility feasibility() const { return feasibility_; }

 private:
  ConicEvaluator target_;
  GridGeometry geometry_;
  ObjectiveNorm norm_;
  Feasibility feasibility_;
};

struct AnnealingParams {
  double initial_temperature = 0.05;
  double cooling = 0.9995;
  std::int64_t steps = 20000;
  int restarts = 3;  // chains = restarts + 1
  std::uint64_t seed = 0;

  void validate() const;
};

struct TracePoint {
  std::int64_t step;  // global step index across chains
  double objective;   // current state
  double best;        // best so far
};

struct ReconstructionResult {
  GridSet best;
  double objective = 0.0;
  std::vector<GridSet> optima;  // oracle mode only
  std::vector<TracePoint> trace;
  bool thin_contact = false;
  std::int64_t steps = 0;  // proposals evaluated
};

/// Sup norm (exact) or the upper end of the L1 bracket.
double objective(const GridSet& set, const ReconstructionProblem& problem);

bool is_feasible(const GridSet& set, const ReconstructionProblem& problem);

/// Largest m*n accepted by exhaustive.
inline constexpr int kExhaustiveLimit = 16;

/// All global optima in lexicographic cell order; best is the first.
ReconstructionResult exhaustive(const ReconstructionProblem& problem);

/// Simulated annealing with single-cell toggles; deterministic in params.seed.
ReconstructionResult local_search(const ReconstructionProblem& problem,
                                  const AnnealingParams& params);

}  // namespace hvconic
