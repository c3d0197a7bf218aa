#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "psips/rng.hpp"

namespace psips {

enum class NoiseKind { gaussian, bernoulli_marginals };

/// A bandit environment: arm/answer features, regression matrix, objective
/// covariance and noise model. Immutable after construction; safe to share
/// across runs.
struct Instance {
  std::string name = "custom";
  int K = 0;  // arms
  int d = 0;  // objectives
  int h = 0;  // feature dimension
  Eigen::MatrixXd A;      // K x h arm features (rows a_i^T)
  Eigen::MatrixXd Z;      // |Z| x h answer features
  Eigen::MatrixXd theta;  // h x d
  Eigen::MatrixXd sigma;  // d x d SPD
  NoiseKind noise = NoiseKind::gaussian;
  double theta_ball = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd sigma_chol;  // lower Cholesky factor of sigma, set by validate()

  int num_answers() const { return static_cast<int>(Z.rows()); }
  bool unstructured() const;
  bool has_features() const { return A.rows() > 0; }

  Eigen::VectorXd mean_of(int answer_index) const;  // theta^T z_i
  Eigen::MatrixXd answer_means() const;             // Z * theta
  Eigen::MatrixXd arm_means() const;                // A * theta
  Eigen::VectorXd arm_mean(int arm_index) const;

  /// Checks invariants (SPD sigma, Bernoulli range, ball radius) and caches
  /// the Cholesky factor of sigma. Throws std::invalid_argument on violation.
  void validate();

  Eigen::VectorXd draw_observation(int arm_index, Rng& rng) const;
};

/// Unstructured instance from a K x d mean matrix (A = Z = identity).
Instance make_unstructured(const Eigen::MatrixXd& means, const Eigen::MatrixXd& sigma,
                           NoiseKind noise = NoiseKind::gaussian,
                           const std::string& name = "custom");

enum class GenKind { gaussian_cube, bernoulli_box, rotation };

Instance gen_random_instance(GenKind kind, int K, int d, Rng& rng,
                             std::optional<double> complexity_cap = std::nullopt);

/// The 20-arm, 3-objective vaccine-trial instance (means and pooled
/// variances embedded from the published tables).
Instance load_covboost();
const std::vector<std::string>& covboost_labels();

/// The 259-design network-on-chip instance. Without a feature file only the
/// regression matrix is available and feature access throws.
Instance load_noc(const std::optional<std::string>& features_path = std::nullopt);

/// The global parameter region Theta: everything, or a per-column ball.
struct ThetaRegion {
  double col_ball = std::numeric_limits<double>::infinity();

  bool contains(const Eigen::MatrixXd& lambda) const {
    if (!std::isfinite(col_ball)) return true;
    for (Eigen::Index c = 0; c < lambda.cols(); ++c)
      if (lambda.col(c).norm() > col_ball) return false;
    return true;
  }
  bool bounded() const { return std::isfinite(col_ball); }
  static ThetaRegion of(const Instance& inst) { return ThetaRegion{inst.theta_ball}; }
};

Instance load_instance_json(const std::string& path);
void save_instance_json(const Instance& inst, const std::string& path);
std::string instance_to_json_string(const Instance& inst);
Instance instance_from_json_string(const std::string& text);

}  // namespace psips
