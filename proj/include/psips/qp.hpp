#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace psips {

/// Halfspace a^T u <= b.
struct Halfspace {
  Eigen::VectorXd a;
  double b = 0.0;
};

/// Euclidean projection onto an intersection of halfspaces (Dykstra).
Eigen::VectorXd dykstra_project(const Eigen::VectorXd& point,
                                const std::vector<Halfspace>& halfspaces,
                                int max_sweeps = 2000, double tol = 1e-12);

struct QpResult {
  Eigen::VectorXd minimizer;
  double value = 0.0;
  bool converged = true;
};

/// Minimize (u - center)^T metric (u - center) subject to halfspaces and an
/// optional per-column Euclidean ball ||u[c*h .. c*h+h)|| <= radius. Without
/// the ball this is an exact whitened projection; with it, projected
/// gradient with Dykstra projections.
QpResult minimize_quadratic(const Eigen::MatrixXd& metric, const Eigen::VectorXd& center,
                            const std::vector<Halfspace>& halfspaces,
                            std::optional<double> col_ball_radius, int h, int d,
                            double tol = 1e-8);

/// Kronecker product A (x) B with vec-of-columns block convention.
Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace psips
