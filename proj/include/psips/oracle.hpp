#pragma once

#include <Eigen/Dense>

#include "psips/estimator.hpp"
#include "psips/pareto.hpp"

namespace psips {

struct BestResponse {
  Eigen::MatrixXd lambda_star;  // h x d, in the closure of its piece
  double value = 0.0;           // achieved squared weighted norm
  int piece_index = -1;
};

/// argmin over Theta cap alt(S) of ||vec(theta_ref - lambda)||^2 in the
/// Sigma^{-1} (x) (V_w + xi I) metric. Closed form per piece for the
/// unstructured diagonal case, whitened projection otherwise.
BestResponse best_response(const Eigen::MatrixXd& theta_ref, const ParetoSet& S,
                           const Eigen::VectorXd& weights, double xi, const Instance& inst,
                           const ThetaRegion& theta, long long piece_budget = 1000000,
                           double tol = 1e-8);

/// GLR(t): half the best-response value at the pull counts.
double glr_infimum(const EstimatorState& est, const ParetoSet& S, const ThetaRegion& theta);

struct CharacteristicTime {
  double t_star = 0.0;
  Eigen::VectorXd w_star;
  int iterations = 0;
  double duality_gap_estimate = 0.0;
  double game_value = 0.0;  // inf at w_star (= 2 / t_star)
  bool converged = true;
};

/// T*(theta) and the optimal allocation by best-response dynamics: AdaHedge
/// over arms against the exact best response, averaged weights reported.
CharacteristicTime characteristic_time(const Instance& inst, int max_iters = 5000,
                                       double tol = 1e-3);

}  // namespace psips
