#include "psips/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "psips/learners.hpp"
#include "psips/stopping.hpp"

namespace psips {

namespace {

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void finalize(RunRecord& rec, const Instance& inst, const EstimatorState& est,
              const ParetoSet& recommended, bool stopped) {
  rec.stopped = stopped;
  rec.tau = est.t();
  rec.recommended = recommended;
  rec.pareto_size = static_cast<int>(recommended.size());
  rec.correct = stopped && recommended == pareto_set_naive(inst.answer_means());
  rec.pull_counts = est.counts();
}

struct GainWork {
  Eigen::MatrixXd diff;
  Eigen::VectorXd proj;
  Eigen::VectorXd gains;
};

// per-arm gain ||vec(theta_hat - lambda)||^2 in the Sigma^{-1} (x) a a^T norm
void arm_gains(const EstimatorState& est, const Eigen::MatrixXd& lambda, GainWork& w) {
  const Instance& inst = est.instance();
  w.diff = est.theta_hat() - lambda;
  w.gains.resize(inst.K);
  for (int a = 0; a < inst.K; ++a) {
    w.proj.noalias() = w.diff.transpose() * inst.A.row(a).transpose();
    w.gains[a] = w.proj.dot(est.sigma_inv() * w.proj);
  }
}

}  // namespace

Calibration calibration_for(const Instance& inst, CalibrationKind kind, double xi, double s) {
  ThresholdDims dims;
  dims.K = inst.K;
  dims.d = inst.d;
  dims.h = inst.h;
  dims.xi = xi;
  dims.l_arms = 0.0;
  for (int i = 0; i < inst.K; ++i) dims.l_arms = std::max(dims.l_arms, inst.A.row(i).norm());
  dims.l_theta = inst.theta_ball;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inst.sigma);
  dims.sigma_min_eig = es.eigenvalues().minCoeff();
  Setting setting;
  if (inst.unstructured()) {
    setting = is_diagonal(inst.sigma) ? Setting::unstructured_diag : Setting::unstructured_corr;
  } else {
    setting = Setting::bai_structured;
    if (kind == CalibrationKind::lemma2) {
      if (inst.d != 1)
        throw std::invalid_argument(
            "calibration: no delta-correct (M, c) is known for structured PSI with d > 1");
      if (!std::isfinite(inst.theta_ball))
        throw std::invalid_argument(
            "calibration: the structured threshold needs a bounded Theta");
      std::fprintf(stderr,
                   "psips: warning: the structured budget is proven for unbounded Theta; "
                   "with a Theta ball the guarantee does not carry over\n");
    }
  }
  return Calibration::make(kind, setting, inst.sigma, dims, s);
}

RunRecord run_psips(const Instance& inst, const RunOptions& opt, std::uint64_t seed) {
  const auto start = Clock::now();
  RunRecord rec;
  rec.algo = "psips";
  rec.delta = opt.delta;
  rec.seed = seed;
  Rng rng(seed);
  const bool unstructured = inst.unstructured();
  EstimatorState est = EstimatorState::init(
      inst, unstructured ? EstimatorMode::unstructured : EstimatorMode::structured, rng,
      opt.xi);
  const Calibration cal = calibration_for(inst, opt.calibration, opt.xi, opt.zeta_s);
  const ThetaRegion theta = ThetaRegion::of(inst);
  AdaHedge hedge(inst.K);
  HalveState halve;
  if (unstructured) {
    halve = HalveState::make_unstructured();
  } else {
    if (!theta.bounded())
      throw std::invalid_argument("run_psips: structured instances need a Theta ball");
    halve = HalveState::make_structured(cal.dims.l_arms, inst.theta_ball);
  }
  const Eigen::VectorXd omega_exp = Eigen::VectorXd::Constant(inst.K, 1.0 / inst.K);
  RecommendCache rcache;
  DrawBuffer shared;
  GainWork gw;
  long long sum_m_t = 0, sum_m_t_delta = 0, rounds = 0;
  ParetoSet recommended;
  bool stopped = false;
  for (long long r = 1; est.t() < opt.max_rounds; ++r) {
    const ParetoSet S = recommend(est, rcache);
    if (unstructured) {
      const double t_eff = std::max<double>(est.t(), 2);
      const double f1 = beta_threshold(t_eff, 1.0 / (t_eff * t_eff), cal.setting, cal.dims,
                                       cal.s);
      halve_update(halve, est, S, f1);
    }
    shared.reset(inst.h, inst.d, 4096);
    const StoppingDecision dec =
        ps_stopping_check(est, S, cal, opt.delta, theta, &shared, rng);
    ++rounds;
    sum_m_t_delta += dec.m_t_delta;
    if (dec.stopped) {
      stopped = true;
      recommended = dec.recommended;
      break;
    }
    const MinLearnerResult ml =
        min_learner_draw(est, halve, S, shared, 10 * dec.budget, theta, rng);
    sum_m_t += ml.m_t;
    rec.fallback_count += ml.fallback ? 1 : 0;
    const Eigen::VectorXd omega = hedge.weights();
    const Eigen::VectorXd wtilde = mix_forced_exploration(omega, r, opt.alpha, omega_exp);
    const int arm = rng.categorical(wtilde);
    const Eigen::VectorXd obs = inst.draw_observation(arm, rng);
    arm_gains(est, ml.lambda, gw);
    hedge.feed_gains(gw.gains);
    est.update(arm, obs);
  }
  finalize(rec, inst, est, recommended, stopped);
  if (rounds > 0) {
    rec.avg_m_t = static_cast<double>(sum_m_t) / rounds;
    rec.avg_m_t_delta = static_cast<double>(sum_m_t_delta) / rounds;
  }
  rec.wall_ms = elapsed_ms(start);
  return rec;
}

RunRecord run_uniform(const Instance& inst, const RunOptions& opt, std::uint64_t seed) {
  const auto start = Clock::now();
  RunRecord rec;
  rec.algo = opt.stopping == StoppingKind::ps ? "uniform" : "uniform-glr";
  rec.delta = opt.delta;
  rec.seed = seed;
  Rng rng(seed);
  const bool unstructured = inst.unstructured();
  EstimatorState est = EstimatorState::init(
      inst, unstructured ? EstimatorMode::unstructured : EstimatorMode::structured, rng,
      opt.xi);
  const Calibration cal = calibration_for(inst, opt.calibration, opt.xi, opt.zeta_s);
  const ThetaRegion theta = ThetaRegion::of(inst);
  RecommendCache rcache;
  long long sum_m_t_delta = 0, rounds = 0;
  ParetoSet recommended;
  bool stopped = false;
  for (long long r = 1; est.t() < opt.max_rounds; ++r) {
    const ParetoSet S = recommend(est, rcache);
    StoppingDecision dec;
    if (opt.stopping == StoppingKind::ps) {
      dec = ps_stopping_check(est, S, cal, opt.delta, theta, nullptr, rng);
      sum_m_t_delta += dec.m_t_delta;
    } else {
      dec = glr_stopping_check(est, S, cal, opt.delta, theta);
    }
    ++rounds;
    if (dec.stopped) {
      stopped = true;
      recommended = dec.recommended;
      break;
    }
    const int arm = static_cast<int>((r - 1) % inst.K);
    est.update(arm, inst.draw_observation(arm, rng));
  }
  finalize(rec, inst, est, recommended, stopped);
  if (rounds > 0) rec.avg_m_t_delta = static_cast<double>(sum_m_t_delta) / rounds;
  rec.wall_ms = elapsed_ms(start);
  return rec;
}

RunRecord run_oracle(const Instance& inst, const RunOptions& opt, std::uint64_t seed,
                     const CharacteristicTime* precomputed) {
  const auto start = Clock::now();
  RunRecord rec;
  rec.algo = "oracle";
  rec.delta = opt.delta;
  rec.seed = seed;
  CharacteristicTime local;
  if (!precomputed) {
    local = characteristic_time(inst);
    precomputed = &local;
  }
  Rng rng(seed);
  const bool unstructured = inst.unstructured();
  EstimatorState est = EstimatorState::init(
      inst, unstructured ? EstimatorMode::unstructured : EstimatorMode::structured, rng,
      opt.xi);
  const Calibration cal = calibration_for(inst, opt.calibration, opt.xi, opt.zeta_s);
  const ThetaRegion theta = ThetaRegion::of(inst);
  RecommendCache rcache;
  long long sum_m_t_delta = 0, rounds = 0;
  ParetoSet recommended;
  bool stopped = false;
  while (est.t() < opt.max_rounds) {
    const ParetoSet S = recommend(est, rcache);
    const StoppingDecision dec =
        ps_stopping_check(est, S, cal, opt.delta, theta, nullptr, rng);
    ++rounds;
    sum_m_t_delta += dec.m_t_delta;
    if (dec.stopped) {
      stopped = true;
      recommended = dec.recommended;
      break;
    }
    const int arm = rng.categorical(precomputed->w_star);
    est.update(arm, inst.draw_observation(arm, rng));
  }
  finalize(rec, inst, est, recommended, stopped);
  if (rounds > 0) rec.avg_m_t_delta = static_cast<double>(sum_m_t_delta) / rounds;
  rec.wall_ms = elapsed_ms(start);
  return rec;
}

RunRecord run_ape(const Instance& inst, const RunOptions& opt, std::uint64_t seed) {
  const auto start = Clock::now();
  if (!inst.unstructured())
    throw std::invalid_argument("run_ape: only unstructured instances are supported");
  RunRecord rec;
  rec.algo = "ape-style";
  rec.delta = opt.delta;
  rec.seed = seed;
  Rng rng(seed);
  EstimatorState est = EstimatorState::init(inst, EstimatorMode::unstructured, rng, 0.0);
  const double sigma_max2 = inst.sigma.diagonal().maxCoeff();
  const int K = inst.K;
  ParetoSet recommended;
  bool stopped = false;
  while (est.t() < opt.max_rounds) {
    const Eigen::MatrixXd& mu = est.theta_hat();
    const ParetoSet S = pareto_set(mu);
    const double t = static_cast<double>(est.t());
    const double beta = std::log(1.0 / opt.delta) + std::log(std::log(std::max(t, 3.0)));
    Eigen::VectorXd radius(K);
    for (int a = 0; a < K; ++a)
      radius[a] = std::sqrt(2.0 * beta * sigma_max2 / est.counts()[a]);
    // most-violated confidence condition over both membership directions
    double worst = std::numeric_limits<double>::infinity();
    int pa = -1, pb = -1;
    std::vector<bool> member(K, false);
    for (int s : S) member[s] = true;
    for (int z = 0; z < K; ++z) {
      if (member[z]) {
        for (int x = 0; x < K; ++x) {
          if (x == z) continue;
          double gap2 = 0.0;
          for (int c = 0; c < inst.d; ++c) {
            const double diff = mu(z, c) - mu(x, c);
            if (diff > 0.0) gap2 += diff * diff;
          }
          const double margin = std::sqrt(gap2) - radius[z] - radius[x];
          if (margin < worst) {
            worst = margin;
            pa = z;
            pb = x;
          }
        }
      } else {
        double best = -std::numeric_limits<double>::infinity();
        int bx = S[0];
        for (int x : S) {
          double mn = std::numeric_limits<double>::infinity();
          for (int c = 0; c < inst.d; ++c) mn = std::min(mn, mu(x, c) - mu(z, c));
          const double margin = mn - radius[x] - radius[z];
          if (margin > best) {
            best = margin;
            bx = x;
          }
        }
        if (best < worst) {
          worst = best;
          pa = z;
          pb = bx;
        }
      }
    }
    if (worst > 0.0) {
      stopped = true;
      recommended = S;
      break;
    }
    const int arm = est.counts()[pa] <= est.counts()[pb] ? pa : pb;
    est.update(arm, inst.draw_observation(arm, rng));
  }
  finalize(rec, inst, est, recommended, stopped);
  rec.wall_ms = elapsed_ms(start);
  return rec;
}

ProfileResult run_profile(const Instance& inst, const RunOptions& opt,
                          const ProfileOptions& prof, std::uint64_t seed) {
  if (prof.horizon < 1) throw std::invalid_argument("run_profile: horizon >= 1 required");
  Rng rng(seed);
  const bool unstructured = inst.unstructured();
  EstimatorState est = EstimatorState::init(
      inst, unstructured ? EstimatorMode::unstructured : EstimatorMode::structured, rng,
      opt.xi);
  const Calibration cal = calibration_for(inst, opt.calibration, opt.xi, opt.zeta_s);
  const ThetaRegion theta = ThetaRegion::of(inst);
  const ParetoSet truth = pareto_set_naive(inst.answer_means());
  AdaHedge hedge(inst.K);
  HalveState halve;
  if (unstructured) {
    halve = HalveState::make_unstructured();
  } else {
    if (!theta.bounded())
      throw std::invalid_argument("run_profile: structured instances need a Theta ball");
    halve = HalveState::make_structured(cal.dims.l_arms, inst.theta_ball);
  }
  const Eigen::VectorXd omega_exp = Eigen::VectorXd::Constant(inst.K, 1.0 / inst.K);
  RecommendCache rcache;
  DrawBuffer shared;
  GainWork gw;
  ProfileResult result;
  std::vector<ProfileRow>& trace = result.rows;
  trace.reserve(static_cast<std::size_t>(prof.horizon));
  for (long long r = 1; r <= prof.horizon; ++r) {
    const ParetoSet S = recommend(est, rcache);
    if (unstructured) {
      const double t_eff = std::max<double>(est.t(), 2);
      const double f1 = beta_threshold(t_eff, 1.0 / (t_eff * t_eff), cal.setting, cal.dims,
                                       cal.s);
      halve_update(halve, est, S, f1);
    }
    shared.reset(inst.h, inst.d, 4096);
    ProfileRow row;
    row.round = r;
    // scan runs for its rejection count; the decision itself is discarded
    const StoppingDecision dec =
        ps_stopping_check(est, S, cal, opt.delta, theta, &shared, rng);
    row.m_t_delta = dec.m_t_delta;
    const MinLearnerResult ml =
        min_learner_draw(est, halve, S, shared, 10 * dec.budget, theta, rng);
    row.m_t = ml.m_t;
    row.error = S != truth;
    if (prof.record_glr) row.glr = glr_statistic(est, S, theta);
    trace.push_back(row);
    const Eigen::VectorXd omega = hedge.weights();
    const Eigen::VectorXd wtilde = mix_forced_exploration(omega, r, opt.alpha, omega_exp);
    const int arm = rng.categorical(wtilde);
    const Eigen::VectorXd obs = inst.draw_observation(arm, rng);
    arm_gains(est, ml.lambda, gw);
    hedge.feed_gains(gw.gains);
    est.update(arm, obs);
  }
  result.final_theta_hat = est.theta_hat();
  result.final_counts = est.counts();
  return result;
}

}  // namespace psips
