#include "psips/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "psips/learners.hpp"
#include "psips/qp.hpp"

namespace psips {

namespace {

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

// Demote piece, separable coordinates: pool z and x at the weighted mean
// wherever z currently exceeds x.
double solve_demote_diag(const Eigen::MatrixXd& mu, const Eigen::VectorXd& w,
                         const Eigen::VectorXd& sigma_diag, int z, int x,
                         Eigen::MatrixXd& lambda) {
  double cost = 0.0;
  const double wz = w[z], wx = w[x];
  for (Eigen::Index c = 0; c < mu.cols(); ++c) {
    const double gap = mu(z, c) - mu(x, c);
    if (gap <= 0.0) continue;
    double m;
    if (wz + wx > 0.0) {
      m = (wz * mu(z, c) + wx * mu(x, c)) / (wz + wx);
      cost += wz * wx / (wz + wx) * gap * gap / sigma_diag[c];
    } else {
      m = 0.5 * (mu(z, c) + mu(x, c));
    }
    lambda(z, c) = m;
    lambda(x, c) = m;
  }
  return cost;
}

// Promote piece, one coordinate: an active-set sweep over which of the
// members assigned to this coordinate get pooled with z.
double solve_promote_coord(const Eigen::MatrixXd& mu, const Eigen::VectorXd& w,
                           double sigma_cc, int z, const std::vector<int>& group, int c,
                           Eigen::MatrixXd& lambda) {
  // members with zero weight move freely and never bind
  std::vector<int> J;
  double free_max = -std::numeric_limits<double>::infinity();
  for (int x : group) {
    if (w[x] > 0.0)
      J.push_back(x);
    else
      free_max = std::max(free_max, mu(x, c));
  }
  const double wz = w[z];
  double best = std::numeric_limits<double>::infinity();
  double best_m = mu(z, c);
  unsigned best_mask = 0;
  if (wz == 0.0) {
    double top = free_max;
    for (int x : J) top = std::max(top, mu(x, c));
    lambda(z, c) = std::max(mu(z, c), top);
    for (int x : group)
      if (w[x] == 0.0) lambda(x, c) = std::min(mu(x, c), lambda(z, c));
    return 0.0;
  }
  if (J.size() > 20) throw std::runtime_error("best_response: promote group too large");
  const unsigned n_masks = 1u << J.size();
  for (unsigned mask = 0; mask < n_masks; ++mask) {
    double num = wz * mu(z, c), den = wz;
    for (std::size_t k = 0; k < J.size(); ++k)
      if (mask & (1u << k)) {
        num += w[J[k]] * mu(J[k], c);
        den += w[J[k]];
      }
    const double m = num / den;
    bool valid = true;
    for (std::size_t k = 0; k < J.size() && valid; ++k) {
      const double mx = mu(J[k], c);
      if (mask & (1u << k))
        valid = mx >= m - 1e-12;  // pooled members are pulled down
      else
        valid = mx <= m + 1e-12;  // the rest must already satisfy m >= mx
    }
    if (!valid) continue;
    double cost = wz * (m - mu(z, c)) * (m - mu(z, c));
    for (std::size_t k = 0; k < J.size(); ++k)
      if (mask & (1u << k)) cost += w[J[k]] * (m - mu(J[k], c)) * (m - mu(J[k], c));
    cost /= sigma_cc;
    if (cost < best) {
      best = cost;
      best_m = m;
      best_mask = mask;
    }
  }
  if (!std::isfinite(best)) throw std::logic_error("best_response: no valid active set");
  lambda(z, c) = std::max(best_m, mu(z, c));
  for (std::size_t k = 0; k < J.size(); ++k)
    if (best_mask & (1u << k)) lambda(J[k], c) = best_m;
  for (int x : group)
    if (w[x] == 0.0 && mu(x, c) > lambda(z, c)) lambda(x, c) = lambda(z, c);
  return best;
}

BestResponse best_response_diag(const Eigen::MatrixXd& mu, const ParetoSet& S,
                                const Eigen::VectorXd& w, const Eigen::VectorXd& sigma_diag,
                                const std::vector<AltPiece>& pieces) {
  BestResponse out;
  out.value = std::numeric_limits<double>::infinity();
  const int d = static_cast<int>(mu.cols());
  Eigen::MatrixXd lambda;
  std::vector<std::vector<int>> groups(d);
  for (int idx = 0; idx < static_cast<int>(pieces.size()); ++idx) {
    const AltPiece& piece = pieces[idx];
    lambda = mu;
    double cost = 0.0;
    if (piece.kind == AltPiece::Kind::demote) {
      cost = solve_demote_diag(mu, w, sigma_diag, piece.z, piece.x, lambda);
    } else {
      for (auto& g : groups) g.clear();
      for (std::size_t j = 0; j < piece.members.size(); ++j)
        groups[piece.coords[j]].push_back(piece.members[j]);
      for (int c = 0; c < d && cost < out.value; ++c) {
        if (groups[c].empty()) continue;
        cost += solve_promote_coord(mu, w, sigma_diag[c], piece.z, groups[c], c, lambda);
      }
    }
    if (cost < out.value) {
      out.value = cost;
      out.lambda_star = lambda;
      out.piece_index = idx;
    }
  }
  return out;
}

std::vector<Halfspace> piece_halfspaces(const AltPiece& piece, const Instance& inst) {
  const int h = inst.h, d = inst.d;
  std::vector<Halfspace> hs;
  auto push = [&](int z, int x, int c, double sign) {
    Halfspace cons;
    cons.a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h) * d);
    cons.a.segment(static_cast<Eigen::Index>(c) * h, h) =
        sign * (inst.Z.row(z) - inst.Z.row(x)).transpose();
    cons.b = 0.0;
    hs.push_back(std::move(cons));
  };
  if (piece.kind == AltPiece::Kind::demote) {
    for (int c = 0; c < d; ++c) push(piece.z, piece.x, c, 1.0);  // (z-x)^T lam e_c <= 0
  } else {
    for (std::size_t j = 0; j < piece.members.size(); ++j)
      push(piece.z, piece.members[j], piece.coords[j], -1.0);  // >= 0
  }
  return hs;
}

}  // namespace

BestResponse best_response(const Eigen::MatrixXd& theta_ref, const ParetoSet& S,
                           const Eigen::VectorXd& weights, double xi, const Instance& inst,
                           const ThetaRegion& theta, long long piece_budget, double tol) {
  if (S.empty()) throw std::invalid_argument("best_response: S must be nonempty");
  const auto pieces = alt_pieces(S, inst.num_answers(), inst.d, piece_budget);
  const bool diag_path =
      inst.unstructured() && is_diagonal(inst.sigma) && xi == 0.0 && !theta.bounded();
  if (diag_path)
    return best_response_diag(theta_ref, S, weights, inst.sigma.diagonal(), pieces);

  Eigen::MatrixXd v_w = xi * Eigen::MatrixXd::Identity(inst.h, inst.h);
  for (int i = 0; i < inst.K; ++i)
    v_w.noalias() += weights[i] * inst.A.row(i).transpose() * inst.A.row(i);
  const Eigen::MatrixXd metric = kron(inst.sigma.inverse(), v_w);
  const Eigen::Map<const Eigen::VectorXd> center(
      theta_ref.data(), static_cast<Eigen::Index>(inst.h) * inst.d);
  std::optional<double> ball;
  if (theta.bounded()) ball = theta.col_ball;
  BestResponse out;
  out.value = std::numeric_limits<double>::infinity();
  for (int idx = 0; idx < static_cast<int>(pieces.size()); ++idx) {
    const auto res = minimize_quadratic(metric, center, piece_halfspaces(pieces[idx], inst),
                                        ball, inst.h, inst.d, tol);
    if (!res.converged) throw std::runtime_error("best_response: projected gradient stalled");
    if (res.value < out.value) {
      out.value = res.value;
      out.lambda_star =
          Eigen::Map<const Eigen::MatrixXd>(res.minimizer.data(), inst.h, inst.d);
      out.piece_index = idx;
    }
  }
  return out;
}

double glr_infimum(const EstimatorState& est, const ParetoSet& S, const ThetaRegion& theta) {
  const Instance& inst = est.instance();
  Eigen::VectorXd w(inst.K);
  for (int i = 0; i < inst.K; ++i) w[i] = static_cast<double>(est.counts()[i]);
  return 0.5 * best_response(est.theta_hat(), S, w, est.xi(), inst, theta).value;
}

CharacteristicTime characteristic_time(const Instance& inst, int max_iters, double tol) {
  const Eigen::MatrixXd means = inst.answer_means();
  const ParetoSet S = pareto_set(means);
  const GapSummary g = gaps(means);
  if (g.degenerate)
    throw std::invalid_argument("characteristic_time: instance has a zero Pareto gap");
  const ThetaRegion theta = ThetaRegion::of(inst);
  AdaHedge hedge(inst.K);
  Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(inst.K);
  const Eigen::MatrixXd sigma_inv = inst.sigma.inverse();
  CharacteristicTime out;
  out.converged = false;
  Eigen::VectorXd gains(inst.K);
  int it = 0;
  while (it < max_iters) {
    ++it;
    const Eigen::VectorXd w = hedge.weights();
    const BestResponse br = best_response(inst.theta, S, w, 0.0, inst, theta);
    const Eigen::MatrixXd diff = inst.theta - br.lambda_star;
    for (int a = 0; a < inst.K; ++a) {
      const Eigen::VectorXd proj = diff.transpose() * inst.A.row(a).transpose();
      gains[a] = proj.dot(sigma_inv * proj);
    }
    hedge.feed_gains(gains);
    w_sum += w;
    if (it % 64 == 0 || it == max_iters) {
      const Eigen::VectorXd w_avg = w_sum / it;
      const double lower = best_response(inst.theta, S, w_avg, 0.0, inst, theta).value;
      const double upper = hedge.cumulative_gains().maxCoeff() / it;
      out.w_star = w_avg;
      out.game_value = lower;
      out.duality_gap_estimate = std::max(0.0, upper - lower);
      if (lower > 0.0 && out.duality_gap_estimate <= tol * lower) {
        out.converged = true;
        break;
      }
    }
  }
  out.iterations = it;
  if (!(out.game_value > 0.0))
    throw std::runtime_error("characteristic_time: game value did not become positive");
  out.t_star = 2.0 / out.game_value;
  return out;
}

}  // namespace psips
