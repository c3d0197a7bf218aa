#include "psips/learners.hpp"

#include <cmath>
#include <stdexcept>

#include "psips/qp.hpp"

namespace psips {

AdaHedge::AdaHedge(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("AdaHedge: need at least one expert");
  losses_ = Eigen::VectorXd::Zero(n);
  gains_ = Eigen::VectorXd::Zero(n);
  w_ = Eigen::VectorXd::Constant(n, 1.0 / n);
  w_valid_ = true;
}

double AdaHedge::eta() const {
  return delta_ > 0.0 ? std::log(static_cast<double>(n_)) / delta_
                      : std::numeric_limits<double>::infinity();
}

double AdaHedge::mix(double eta, const Eigen::VectorXd& losses, Eigen::VectorXd* w_out) {
  const double mn = losses.minCoeff();
  const int n = static_cast<int>(losses.size());
  Eigen::VectorXd w(n);
  if (std::isinf(eta)) {
    for (int i = 0; i < n; ++i) w[i] = losses[i] == mn ? 1.0 : 0.0;
    const double s = w.sum();
    if (w_out) *w_out = w / s;
    return mn;
  }
  w = (-(eta) * (losses.array() - mn)).exp();
  const double s = w.sum();
  if (w_out) *w_out = w / s;
  return mn - std::log(s / n) / eta;
}

const Eigen::VectorXd& AdaHedge::weights() const {
  if (!w_valid_) {
    mix(eta(), losses_, &w_);
    w_valid_ = true;
  }
  return w_;
}

void AdaHedge::feed_gains(const Eigen::VectorXd& g) {
  if (g.size() != n_) throw std::invalid_argument("AdaHedge: gain dimension mismatch");
  if (!g.allFinite()) throw std::invalid_argument("AdaHedge: non-finite gain");
  const double et = eta();
  Eigen::VectorXd w;
  const double m_prev = mix(et, losses_, &w);
  const double hedge_loss = w.dot(-g);
  losses_ -= g;
  gains_ += g;
  const double m_post = mix(et, losses_, nullptr);
  delta_ += std::max(0.0, hedge_loss - (m_post - m_prev));
  earned_ += w.dot(g);
  ++rounds_;
  w_valid_ = false;
}

HalveState HalveState::make_unstructured() { return HalveState{}; }

HalveState HalveState::make_structured(double l_arms, double l_theta) {
  HalveState h;
  h.structured = true;
  h.B = l_arms * l_theta;
  h.eta = 1.0 / (8.0 * l_arms * l_arms * l_theta * l_theta);
  return h;
}

bool HalveState::theta_t_contains(const Eigen::MatrixXd& answer_means,
                                  const Eigen::MatrixXd& sigma_inv,
                                  const ThetaRegion& global_theta,
                                  const Eigen::MatrixXd& lambda) const {
  if (structured) return global_theta.contains(lambda);
  const double b2 = B * B;
  for (Eigen::Index i = 0; i < answer_means.rows(); ++i) {
    const auto row = answer_means.row(i);
    if (row * sigma_inv * row.transpose() >= b2) return false;
  }
  return true;
}

namespace {

double ucb_h(const EstimatorState& est, const Eigen::VectorXd& a, double sqrt_f1) {
  const Eigen::VectorXd proj = est.theta_hat().transpose() * a;
  const double data_term = std::sqrt(proj.dot(est.sigma_inv() * proj));
  return sqrt_f1 * std::sqrt(est.feature_norm2_vinv(a)) + data_term;
}

}  // namespace

void halve_update(HalveState& halve, const EstimatorState& est, const ParetoSet& S,
                  double f1_of_t) {
  if (halve.structured) return;
  const Instance& inst = est.instance();
  const double sqrt_f1 = std::sqrt(std::max(f1_of_t, 0.0));
  const int n = inst.num_answers();
  std::vector<bool> member(n, false);
  for (int s : S) member[s] = true;
  double U = 0.0;
  for (int i : S)
    for (int j : S)
      if (i != j) {
        const Eigen::VectorXd a = (inst.Z.row(i) - inst.Z.row(j)).transpose();
        U = std::max(U, ucb_h(est, a, sqrt_f1));
      }
  for (int i = 0; i < n; ++i) {
    if (member[i]) continue;
    for (int j : S) {
      const Eigen::VectorXd a = (inst.Z.row(i) - inst.Z.row(j)).transpose();
      U = std::max(U, 2.0 * ucb_h(est, a, sqrt_f1));
    }
  }
  double u = 0.0;
  for (int i = 0; i < inst.K; ++i)
    u = std::max(u, ucb_h(est, inst.A.row(i).transpose(), sqrt_f1));
  // halving events only: accept a new bound when it is at most half the old
  if (U <= 0.5 * halve.p) halve.p = U;
  if (u <= 0.5 * halve.C) halve.C = u;
  halve.B = std::max(halve.C + halve.p, halve.b_floor);
  halve.eta = 1.0 / (8.0 * halve.B * halve.B);
}

namespace {

// Projection of theta_hat just inside the cheapest piece of alt(S), used
// when the rejection cap fires. Demote pieces when |S| >= 2, single-member
// promote pieces otherwise.
Eigen::MatrixXd fallback_lambda(const EstimatorState& est, const ParetoSet& S) {
  const Instance& inst = est.instance();
  const int h = inst.h, d = inst.d;
  const Eigen::MatrixXd metric = kron(est.sigma_inv(), est.V());
  const Eigen::Map<const Eigen::VectorXd> center(est.theta_hat().data(),
                                                 static_cast<Eigen::Index>(h) * d);
  const double margin = 1e-9 * (1.0 + est.theta_hat().cwiseAbs().maxCoeff());
  auto halfspaces_for = [&](int z, int x, bool demote_all_coords, int coord) {
    std::vector<Halfspace> hs;
    const Eigen::VectorXd dir = (inst.Z.row(z) - inst.Z.row(x)).transpose();
    auto push = [&](int c, double sign) {
      Halfspace cons;
      cons.a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h) * d);
      cons.a.segment(static_cast<Eigen::Index>(c) * h, h) = sign * dir;
      cons.b = -margin;
      hs.push_back(std::move(cons));
    };
    if (demote_all_coords) {
      for (int c = 0; c < d; ++c) push(c, 1.0);  // (z-x)^T lambda e_c <= -margin
    } else {
      push(coord, -1.0);  // (z-x)^T lambda e_c >= margin
    }
    return hs;
  };
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u = center;
  if (S.size() >= 2) {
    for (int z : S)
      for (int x : S)
        if (z != x) {
          const auto res =
              minimize_quadratic(metric, center, halfspaces_for(z, x, true, 0),
                                 std::nullopt, h, d);
          if (res.value < best) {
            best = res.value;
            best_u = res.minimizer;
          }
        }
  } else {
    const int x = S[0];
    for (int z = 0; z < inst.num_answers(); ++z) {
      if (z == x) continue;
      for (int c = 0; c < d; ++c) {
        const auto res = minimize_quadratic(metric, center,
                                            halfspaces_for(z, x, false, c),
                                            std::nullopt, h, d);
        if (res.value < best) {
          best = res.value;
          best_u = res.minimizer;
        }
      }
    }
  }
  return Eigen::Map<const Eigen::MatrixXd>(best_u.data(), h, d);
}

}  // namespace

MinLearnerResult min_learner_draw(const EstimatorState& est, const HalveState& halve,
                                  const ParetoSet& S, const DrawBuffer& shared_draws,
                                  long long cap, const ThetaRegion& global_theta,
                                  Rng& rng) {
  const Instance& inst = est.instance();
  if (!(halve.eta > 0.0))
    throw std::logic_error("min_learner_draw: eta not initialized (run halve_update)");
  const double infl = 1.0 / std::sqrt(halve.eta);
  const bool identity_answers = inst.unstructured();
  MinLearnerResult out;
  Eigen::MatrixXd v(inst.h, inst.d), lambda(inst.h, inst.d), means;
  for (long long m = 1; m <= cap; ++m) {
    if (m <= static_cast<long long>(shared_draws.count()))
      v = shared_draws.at(static_cast<int>(m - 1));
    else
      est.centered_draw(rng, v);
    lambda = est.theta_hat() + infl * v;
    const Eigen::MatrixXd& mu = identity_answers ? lambda : (means = inst.Z * lambda);
    if (halve.theta_t_contains(mu, est.sigma_inv(), global_theta, lambda) &&
        in_alt_means(mu, S)) {
      out.lambda = lambda;
      out.m_t = m;
      return out;
    }
  }
  out.lambda = fallback_lambda(est, S);
  out.m_t = cap;
  out.fallback = true;
  return out;
}

Eigen::VectorXd mix_forced_exploration(const Eigen::VectorXd& omega, long long t,
                                       double alpha, const Eigen::VectorXd& omega_exp) {
  if (t < 1) throw std::invalid_argument("mix_forced_exploration: t >= 1 required");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("mix_forced_exploration: alpha must lie in (0,1)");
  const double gamma = std::pow(static_cast<double>(t), -alpha);
  return (1.0 - gamma) * omega + gamma * omega_exp;
}

}  // namespace psips
