#include "psips/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace psips {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.50662827463100050242;
}  // namespace

double erfcx(double y) {
  if (y > 26.0) {
    // Asymptotic series 1/(y sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2y^2)^k;
    // at y > 26 ten terms reach machine precision.
    const double inv2y2 = 1.0 / (2.0 * y * y);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
      term *= -(2.0 * k - 1.0) * inv2y2;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum / (y * std::sqrt(kPi));
  }
  return std::exp(y * y) * std::erfc(y);
}

double mills_ratio(double x) { return std::sqrt(kPi / 2.0) * erfcx(x / std::sqrt(2.0)); }

double r_small(double delta, int n) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("r_small: delta not in (0,1)");
  if (n < 1) throw std::invalid_argument("r_small: n < 1");
  const double x = std::sqrt(2.0 / n * std::log(1.0 / delta));
  return std::pow(mills_ratio(x) / kSqrt2Pi, n);
}

double lambert_wbar(double x) {
  if (!(x >= 1.0)) throw std::invalid_argument("lambert_wbar: requires x >= 1");
  if (x == 1.0) return 1.0;
  // Bracket from the two-sided bound, then safeguarded Newton on
  // g(w) = w - log(w) - x (increasing and convex on [1, inf)).
  double lo = x + std::log(x);
  double hi = lo + 0.5;
  double w = lo;
  for (int it = 0; it < 100; ++it) {
    const double g = w - std::log(w) - x;
    if (std::abs(g) <= 1e-13) break;
    if (g > 0.0) hi = w; else lo = w;
    const double gp = 1.0 - 1.0 / w;
    double step = (gp > 0.0) ? g / gp : 0.0;
    double cand = w - step;
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    if (cand == w) break;
    w = cand;
  }
  return w;
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("riemann_zeta: requires s > 1");
  if (s == 2.0) return kPi * kPi / 6.0;
  // Euler-Maclaurin with N = 16 and four Bernoulli correction terms.
  const int N = 16;
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) sum += std::pow(n, -s);
  sum += std::pow(N, 1.0 - s) / (s - 1.0);
  sum -= 0.5 * std::pow(N, -s);
  static const double b2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30};
  double rising = s;                    // s(s+1)...(s+2j-2), built incrementally
  double fact = 2.0;                    // (2j)!
  double npow = std::pow(N, -s - 1.0);  // N^{-s-2j+1}
  for (int j = 1; j <= 4; ++j) {
    sum += b2k[j - 1] / fact * rising * npow;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    npow /= static_cast<double>(N) * N;
  }
  return sum;
}

double beta_threshold(double t, double delta, Setting setting, const ThresholdDims& dims,
                      double s) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("beta_threshold: delta not in (0,1)");
  if (setting == Setting::bai_structured) {
    if (!std::isfinite(dims.l_theta))
      throw std::invalid_argument("beta_threshold: structured form needs a bounded Theta");
    const double log_term =
        std::log(1.0 / delta) +
        0.5 * dims.d * dims.h * std::log1p(dims.l_arms * dims.l_arms * t / (dims.h * dims.xi));
    const double bias = std::sqrt(dims.d * dims.l_theta * dims.l_theta /
                                  (2.0 * dims.sigma_min_eig * dims.xi));
    const double root = std::sqrt(std::max(log_term, 0.0)) + bias;
    return root * root;
  }
  const double d = dims.d, K = dims.K;
  const double log_t_over_K = std::max(0.0, std::log(std::max(t, 1.0) / K));
  const double arg = 2.0 / (d * K) * (K * s + K * std::log(riemann_zeta(s)) + std::log(1.0 / delta)) +
                     2.0 * s / d * std::log1p(d / (2.0 * s) * log_t_over_K) + 1.0;
  return 0.5 * d * K * lambert_wbar(std::max(arg, 1.0));
}

Calibration Calibration::make(CalibrationKind kind, Setting setting,
                              const Eigen::MatrixXd& sigma, const ThresholdDims& dims,
                              double s) {
  Calibration cal;
  cal.kind = kind;
  cal.setting = setting;
  cal.s = s;
  cal.dims = dims;
  cal.zeta_s = riemann_zeta(s);
  if (setting == Setting::unstructured_corr) {
    Eigen::MatrixXd sigma_inv = sigma.inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_inv);
    cal.sigma_bar = es.eigenvalues().maxCoeff();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sigma.rows());
    cal.d_sigma = ones.dot(sigma_inv * ones) / cal.sigma_bar;
    cal.det_factor = 1.0 / std::sqrt((cal.sigma_bar * sigma).determinant());
  }
  return cal;
}

long long budget_M(double t, double delta, int pareto_size, const Calibration& cal) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("budget_M: delta not in (0,1)");
  t = std::max(t, 1.0);
  double M;
  if (cal.kind == CalibrationKind::heuristic) {
    M = std::ceil(std::log(t / delta) / delta);
  } else {
    const int d = cal.dims.d, p = pareto_size;
    double q;
    switch (cal.setting) {
      case Setting::unstructured_diag:
        q = std::min(r_small(delta, d), r_small(delta, d + p));
        break;
      case Setting::unstructured_corr: {
        const double e1 = cal.d_sigma / d;
        const double e2 = (cal.d_sigma + p) / (d + p);
        q = cal.det_factor *
            std::min(r_small(std::pow(delta, e1), d), r_small(std::pow(delta, e2), d + p));
        break;
      }
      case Setting::bai_structured:
        q = r_small(delta, 1);
        break;
      default:
        throw std::logic_error("budget_M: unknown setting");
    }
    M = std::ceil(std::log(2.0 * std::pow(t, cal.s) * cal.zeta_s / delta) / (delta * q));
  }
  return std::max(1LL, static_cast<long long>(M));
}

double inflation_c(double t, double delta, const Calibration& cal) {
  if (cal.kind == CalibrationKind::heuristic) {
    const double tt = std::max(t, 3.0);
    return 1.0 + std::log(std::log(tt)) / std::log(1.0 / delta);
  }
  return beta_threshold(t, delta / 2.0, cal.setting, cal.dims, cal.s) / std::log(1.0 / delta);
}

double mvn_orthant_lower_bound(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& x) {
  const int d = static_cast<int>(sigma.rows());
  const Eigen::MatrixXd sigma_inv = sigma.inverse();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_inv);
  const double sigma_bar = es.eigenvalues().maxCoeff();
  const double quad = x.dot(sigma_inv * x);
  const double det_vs = std::pow(sigma_bar, d) * sigma.determinant();
  // product of scalar Mills ratios at z = V^{-1/2} Sigma^{-1} x, V = sigma_bar I;
  // keeping the signs makes the bound tight in one dimension
  const Eigen::VectorXd z = sigma_inv * x / std::sqrt(sigma_bar);
  double log_prod = 0.0;
  for (int c = 0; c < d; ++c) log_prod += std::log(mills_ratio(z[c]));
  return std::pow(2.0 * kPi, -0.5 * d) / std::sqrt(det_vs) *
         std::exp(-0.5 * quad + log_prod);
}

}  // namespace psips
