#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrgp/dataset.hpp"
#include "mrgp/gp.hpp"
#include "mrgp/hyperparameters.hpp"

namespace mrgp {

struct OptimizerConfig {
  int max_iters = 500;
  double grad_tol = 1e-6;  // on the gradient infinity-norm
  double step_init = 0.1;
  std::uint64_t seed = 0;
  int restarts = 3;  // total starting points; the first is the unjittered init
  /// Largest N*R for which the repeat variant may be optimized.
  std::size_t repeat_limit = 4000;
  bool force_repeat = false;

  void validate() const;
};

struct FitReport {
  Hyperparameters final_hp;
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
  /// Objective evaluations that needed diagonal jitter.
  int jitter_events = 0;
  double max_jitter = 0.0;
  int best_restart = 0;
};

/// Objective of the given variant and its exact gradient with respect to
/// (log_s, log_l, log_sigma). Ratings are shifted by -offset.
ObjectiveValue objective_and_gradient(const Dataset& ds, Variant variant, const Hyperparameters& hp,
                                      double offset = 0.0, bool with_gradient = true);

/// s from the spread of the rating means, l from the median pairwise input
/// distance, sigma from the pooled within-row spread (or 0.1 s).
Hyperparameters default_init(const Dataset& ds);

/// Gradient ascent with Armijo backtracking from `init` (default_init when
/// absent) plus jittered restarts. Returns the best restart.
FitReport maximize(const Dataset& ds, Variant variant, const OptimizerConfig& cfg,
                   std::optional<Hyperparameters> init = std::nullopt, double offset = 0.0);

}  // namespace mrgp
