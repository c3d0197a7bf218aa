#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "psips/estimator.hpp"
#include "psips/pareto.hpp"
#include "psips/rng.hpp"

namespace psips {

/// AdaHedge over K experts. The game feeds gains; internally these are the
/// negated losses of the standard recurrence (de Rooij et al.).
class AdaHedge {
 public:
  explicit AdaHedge(int n);

  const Eigen::VectorXd& weights() const;
  void feed_gains(const Eigen::VectorXd& gains);

  const Eigen::VectorXd& cumulative_gains() const { return gains_; }
  double mix_gap() const { return delta_; }
  /// max_a G_T(a) minus the gains the played weights earned.
  double realized_regret() const { return gains_.maxCoeff() - earned_; }
  long long rounds() const { return rounds_; }

 private:
  int n_;
  Eigen::VectorXd losses_;  // cumulative
  Eigen::VectorXd gains_;
  double delta_ = 0.0;
  double earned_ = 0.0;
  long long rounds_ = 0;
  mutable Eigen::VectorXd w_;
  mutable bool w_valid_ = false;

  double eta() const;
  static double mix(double eta, const Eigen::VectorXd& losses, Eigen::VectorXd* w_out);
};

/// Online bound tracking for the min learner: B_t = C_t + p_t shrinks by
/// halving events, eta_t = 1/(8 B_t^2). In the structured setting the
/// constants are fixed at construction and updates are no-ops.
struct HalveState {
  bool structured = false;
  double B = std::numeric_limits<double>::infinity();
  double C = std::numeric_limits<double>::infinity();
  double p = std::numeric_limits<double>::infinity();
  double eta = 0.0;
  double b_floor = 1e-6;

  static HalveState make_unstructured();
  static HalveState make_structured(double l_arms, double l_theta);

  /// Theta_t membership. Unstructured: every row of the answer means stays
  /// inside the Sigma^{-1} ball of radius B. Structured: the fixed Theta.
  bool theta_t_contains(const Eigen::MatrixXd& answer_means,
                        const Eigen::MatrixXd& sigma_inv,
                        const ThetaRegion& global_theta,
                        const Eigen::MatrixXd& lambda) const;
};

/// One Estimate-and-Halve step from the current estimate and empirical
/// Pareto set; f1_of_t is the anytime confidence threshold beta(t, 1/t^2).
void halve_update(HalveState& halve, const EstimatorState& est, const ParetoSet& S,
                  double f1_of_t);

struct MinLearnerResult {
  Eigen::MatrixXd lambda;  // h x d
  long long m_t = 0;
  bool fallback = false;
};

/// First inflated posterior draw lying in Theta_t and alt(S). Consumes the
/// stopping rule's centered draws before drawing fresh ones; after `cap`
/// rejections falls back to a projection of theta_hat into the nearest
/// piece of alt(S).
MinLearnerResult min_learner_draw(const EstimatorState& est, const HalveState& halve,
                                  const ParetoSet& S, const DrawBuffer& shared_draws,
                                  long long cap, const ThetaRegion& global_theta, Rng& rng);

/// (1 - gamma_t) omega + gamma_t omega_exp with gamma_t = t^{-alpha}.
Eigen::VectorXd mix_forced_exploration(const Eigen::VectorXd& omega, long long t,
                                       double alpha, const Eigen::VectorXd& omega_exp);

}  // namespace psips
