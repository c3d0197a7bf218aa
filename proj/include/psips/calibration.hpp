#pragma once

#include <Eigen/Dense>
#include <limits>

namespace psips {

/// Scaled complementary error function e^{y^2} erfc(y), finite for all y
/// where the result is representable.
double erfcx(double y);

/// Mills ratio R(x) = P(X > x) / phi(x) for X standard normal.
double mills_ratio(double x);

/// r(delta, n) = ((1/sqrt(2*pi)) R(sqrt((2/n) log(1/delta))))^n.
double r_small(double delta, int n);

/// Wbar_{-1}(x) = -W_{-1}(-e^{-x}): the unique w >= 1 with w - log(w) = x.
/// Requires x >= 1.
double lambert_wbar(double x);

/// Riemann zeta for s > 1 (closed form at s = 2, Euler-Maclaurin otherwise).
double riemann_zeta(double s);

enum class CalibrationKind { lemma2, heuristic };
enum class Setting { unstructured_diag, unstructured_corr, bai_structured };

/// Dimensions and constants a threshold needs; fill what the setting uses.
struct ThresholdDims {
  int K = 0;
  int d = 0;
  int h = 0;
  double xi = 1.0;         // regularization (structured)
  double l_arms = 0.0;     // max_a ||a||_2
  double l_theta = std::numeric_limits<double>::infinity();  // max_c ||lambda e_c||_2 over Theta
  double sigma_min_eig = 0.0;
};

/// Anytime concentration threshold beta(t, delta). The zeta exponent s only
/// enters the unstructured form.
double beta_threshold(double t, double delta, Setting setting, const ThresholdDims& dims,
                      double s = 2.0);

/// Threshold family selecting the Lemma-2 exact or the experiment heuristic
/// (M, c). Constants derived from Sigma are cached at construction.
struct Calibration {
  CalibrationKind kind = CalibrationKind::heuristic;
  Setting setting = Setting::unstructured_diag;
  double s = 2.0;
  ThresholdDims dims;
  // cached from Sigma (correlated unstructured case)
  double sigma_bar = 1.0;   // |||Sigma^{-1}||| operator norm
  double d_sigma = 1.0;     // ||1_d||^2_{(sigma_bar*Sigma)^{-1}}
  double det_factor = 1.0;  // det(Sigma*sigma_bar)^{-1/2}
  double zeta_s = 0.0;

  static Calibration make(CalibrationKind kind, Setting setting,
                          const Eigen::MatrixXd& sigma, const ThresholdDims& dims,
                          double s = 2.0);
};

/// Posterior-draw budget M(t, delta). pareto_size enters the Lemma-2 q.
long long budget_M(double t, double delta, int pareto_size, const Calibration& cal);

/// Posterior inflation c(t, delta).
double inflation_c(double t, double delta, const Calibration& cal);

/// Lower bound on P(X >= x), X ~ N(0, Sigma), from the pooled Mills bound
/// with V = sigma_bar * I. Exact in one dimension.
double mvn_orthant_lower_bound(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& x);

}  // namespace psips
