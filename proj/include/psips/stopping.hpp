#pragma once

#include <Eigen/Dense>
#include <vector>

#include "psips/calibration.hpp"
#include "psips/estimator.hpp"
#include "psips/pareto.hpp"
#include "psips/rng.hpp"

namespace psips {

struct StoppingDecision {
  bool stopped = false;
  ParetoSet recommended;     // set iff stopped
  long long m_t_delta = 0;   // first alternative hit, or the budget when none
  long long draws_used = 0;
  long long budget = 0;      // M(t, delta) used for this check
};

/// The posterior-sampling stopping scan: sequential inflated draws, stop
/// when all M miss Theta cap alt(S). Every centered draw is forwarded to
/// shared_sink (up to its capacity) for reuse by the min learner.
StoppingDecision ps_stopping_check(const EstimatorState& est, const ParetoSet& S,
                                   const Calibration& cal, double delta,
                                   const ThetaRegion& theta, DrawBuffer* shared_sink,
                                   Rng& rng);

/// GLR(t) through the best-response oracle (exact in the unstructured
/// diagonal case, whitened projection otherwise).
double glr_statistic(const EstimatorState& est, const ParetoSet& S, const ThetaRegion& theta);

StoppingDecision glr_stopping_check(const EstimatorState& est, const ParetoSet& S,
                                    const Calibration& cal, double delta,
                                    const ThetaRegion& theta);

struct RecommendCache {
  ParetoSet last;
};

/// Empirical Pareto set of the current estimate.
ParetoSet recommend(const EstimatorState& est);

/// Cached variant: keeps the previous set while the estimate stays outside
/// alt of it.
ParetoSet recommend(const EstimatorState& est, RecommendCache& cache);

}  // namespace psips
