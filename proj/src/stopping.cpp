#include "psips/stopping.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

#include "psips/oracle.hpp"

namespace psips {

StoppingDecision ps_stopping_check(const EstimatorState& est, const ParetoSet& S,
                                   const Calibration& cal, double delta,
                                   const ThetaRegion& theta, DrawBuffer* shared_sink,
                                   Rng& rng) {
  const Instance& inst = est.instance();
  const double t_index = static_cast<double>(est.t());
  const long long M = budget_M(t_index, delta, static_cast<int>(S.size()), cal);
  const double sqrt_c = std::sqrt(inflation_c(t_index, delta, cal));
  if (M > 10000000LL) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      std::fprintf(stderr,
                   "psips: posterior budget M = %lld exceeds 1e7; "
                   "a full no-hit scan at this size is expensive\n",
                   M);
  }
  StoppingDecision dec;
  dec.budget = M;
  const bool identity_answers = inst.unstructured();
  const bool check_theta = theta.bounded();
  Eigen::MatrixXd v(inst.h, inst.d), cand(inst.h, inst.d);
  Eigen::MatrixXd means(inst.num_answers(), inst.d);
  const double* th = est.theta_hat().data();
  double* vd = v.data();
  double* cd = cand.data();
  const long long hd = static_cast<long long>(inst.h) * inst.d;
  for (long long m = 1; m <= M; ++m) {
    est.centered_draw(rng, v);
    if (shared_sink && !shared_sink->full()) shared_sink->push(v);
    for (long long idx = 0; idx < hd; ++idx) cd[idx] = th[idx] + sqrt_c * vd[idx];
    if (check_theta && !theta.contains(cand)) continue;
    bool hit;
    if (identity_answers) {
      hit = in_alt_means(cand, S);
    } else {
      means.noalias() = inst.Z * cand;
      hit = in_alt_means(means, S);
    }
    if (hit) {
      dec.m_t_delta = m;
      dec.draws_used = m;
      return dec;
    }
  }
  dec.stopped = true;
  dec.recommended = S;
  dec.m_t_delta = M;
  dec.draws_used = M;
  return dec;
}

double glr_statistic(const EstimatorState& est, const ParetoSet& S,
                     const ThetaRegion& theta) {
  return glr_infimum(est, S, theta);
}

StoppingDecision glr_stopping_check(const EstimatorState& est, const ParetoSet& S,
                                    const Calibration& cal, double delta,
                                    const ThetaRegion& theta) {
  StoppingDecision dec;
  const double glr = glr_statistic(est, S, theta);
  const double thresh =
      beta_threshold(static_cast<double>(est.t()), delta, cal.setting, cal.dims, cal.s);
  dec.stopped = glr > thresh;
  if (dec.stopped) dec.recommended = S;
  return dec;
}

ParetoSet recommend(const EstimatorState& est) {
  const Instance& inst = est.instance();
  if (inst.unstructured()) return pareto_set(est.theta_hat());
  return pareto_set(inst.Z * est.theta_hat());
}

ParetoSet recommend(const EstimatorState& est, RecommendCache& cache) {
  const Instance& inst = est.instance();
  if (cache.last.empty()) {
    cache.last = recommend(est);
    return cache.last;
  }
  const Eigen::MatrixXd means =
      inst.unstructured() ? est.theta_hat() : Eigen::MatrixXd(inst.Z * est.theta_hat());
  if (!in_alt_means(means, cache.last)) return cache.last;
  cache.last = pareto_set(means);
  return cache.last;
}

}  // namespace psips
