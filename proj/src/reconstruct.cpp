#include "hvconic/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hvconic/random.hpp"

namespace hvconic {

ReconstructionProblem::ReconstructionProblem(ConicEvaluator target, GridGeometry geometry,
                                             ObjectiveNorm norm, Feasibility feasibility)
    : target_(std::move(target)),
      geometry_(std::move(geometry)),
      norm_(norm),
      feasibility_(feasibility) {
  if (!(target_.mass() > 0.0)) throw Error(ErrorCode::ZeroMass, "target mass must be positive");
  if (norm_.kind == NormKind::L1 && norm_.l1_refine < 1) {
    throw Error(ErrorCode::InvalidParameter, "l1 refine must be >= 1");
  }
}

void AnnealingParams::validate() const {
  if (!(initial_temperature > 0.0) || !std::isfinite(initial_temperature)) {
    throw Error(ErrorCode::InvalidParameter, "initial temperature must be positive");
  }
  if (!(cooling > 0.0 && cooling < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "cooling must lie in (0, 1)");
  }
  if (steps < 0) throw Error(ErrorCode::InvalidParameter, "steps must be non-negative");
  if (restarts < 0) throw Error(ErrorCode::InvalidParameter, "restarts must be non-negative");
}

namespace {

DistanceBracket objective_bracket(const GridSet& set, const ReconstructionProblem& problem) {
  if (!(set.geometry() == problem.geometry())) {
    throw Error(ErrorCode::GeometryMismatch, "candidate is not on the problem geometry");
  }
  const Box& box = problem.geometry().box();
  const ConicEvaluator f = conic_of(set);
  if (problem.norm().kind == NormKind::Sup) {
    const double v = sup_norm_diff(f, problem.target(), box);
    return {v, v};
  }
  return l1_norm_diff(f, problem.target(), box, problem.norm().l1_refine);
}

}  // namespace

double objective(const GridSet& set, const ReconstructionProblem& problem) {
  return objective_bracket(set, problem).upper;
}

bool is_feasible(const GridSet& set, const ReconstructionProblem& problem) {
  if (set.empty() || !is_hv_convex(set) || !is_connected(set)) return false;
  return problem.feasibility() == Feasibility::HvConnected ||
         in_level_set(set, problem.geometry().box());
}

ReconstructionResult exhaustive(const ReconstructionProblem& problem) {
  const auto& g = problem.geometry();
  if (g.cell_count() > static_cast<std::size_t>(kExhaustiveLimit)) {
    throw Error(ErrorCode::TooLarge, "exhaustive search is limited to " +
                                         std::to_string(kExhaustiveLimit) + " cells");
  }
  const bool full = problem.feasibility() == Feasibility::HvConnectedFullBox;
  auto candidates = enumerate_hv_connected(g, full);
  if (candidates.empty()) {
    throw Error(ErrorCode::InvalidParameter, "no feasible set on this geometry");
  }

  std::vector<DistanceBracket> values;
  values.reserve(candidates.size());
  double best_upper = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    values.push_back(objective_bracket(c, problem));
    best_upper = std::min(best_upper, values.back().upper);
  }
  const Box& box = g.box();
  const double rounding =
      1e-12 * std::max(1.0, problem.target().mass() * (box.width() + box.height()));

  ReconstructionResult result{candidates.front(), 0.0, {}, {}, false, 0};
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (values[k].upper <= best_upper + values[k].width() + rounding) {
      result.optima.push_back(candidates[k]);
    }
  }
  result.best = result.optima.front();
  result.objective = objective(result.best, problem);
  result.thin_contact = has_thin_contact(result.best);
  result.steps = static_cast<std::int64_t>(candidates.size());
  result.trace.push_back({0, result.objective, result.objective});
  return result;
}

ReconstructionResult local_search(const ReconstructionProblem& problem,
                                  const AnnealingParams& params) {
  params.validate();
  const auto& g = problem.geometry();
  const bool full = problem.feasibility() == Feasibility::HvConnectedFullBox;
  const int chains = params.restarts + 1;
  const std::int64_t stride = std::max<std::int64_t>(1, params.steps / 200);

  std::optional<GridSet> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<TracePoint> trace;
  std::int64_t evaluated = 0;

  for (int chain = 0; chain < chains && best_value > 0.0; ++chain) {
    Rng rng(params.seed, static_cast<std::uint64_t>(chain));
    GridSet current = sample_hv_convex(g, rng.next(), full);
    double current_value = objective(current, problem);
    const std::int64_t base = static_cast<std::int64_t>(chain) * params.steps;
    if (current_value < best_value) {
      best_value = current_value;
      best = current;
    }
    trace.push_back({base, current_value, best_value});

    double temperature = params.initial_temperature;
    for (std::int64_t step = 1; step <= params.steps && best_value > 0.0; ++step) {
      const auto cell = static_cast<std::size_t>(rng.below(g.cell_count()));
      const int i = static_cast<int>(cell % static_cast<std::size_t>(g.m()));
      const int j = static_cast<int>(cell / static_cast<std::size_t>(g.m()));
      GridSet candidate = current.toggled(i, j);
      const double draw = rng.unit();
      bool improved = false;
      if (is_feasible(candidate, problem)) {
        ++evaluated;
        const double value = objective(candidate, problem);
        const double delta = value - current_value;
        if (delta <= 0.0 || draw < std::exp(-delta / temperature)) {
          current = std::move(candidate);
          current_value = value;
          if (current_value < best_value) {
            best_value = current_value;
            best = current;
            improved = true;
          }
        }
      }
      temperature *= params.cooling;
      if (improved || step % stride == 0 || best_value <= 0.0) {
        trace.push_back({base + step, current_value, best_value});
      }
    }
  }

  ReconstructionResult result{*best, 0.0, {}, {}, false, 0};
  result.objective = objective(result.best, problem);
  result.thin_contact = has_thin_contact(result.best);
  result.trace = std::move(trace);
  result.steps = evaluated;
  return result;
}

}  // namespace hvconic
