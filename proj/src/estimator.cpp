#include "psips/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace psips {

EstimatorState EstimatorState::init(const Instance& inst, EstimatorMode mode, Rng& rng,
                                    double xi) {
  EstimatorState st;
  st.inst_ = &inst;
  st.mode_ = mode;
  st.sigma_chol_data_ = inst.sigma_chol.data();
  st.sigma_inv_ = inst.sigma.inverse();
  st.counts_.assign(inst.K, 0);
  const int h = inst.h, d = inst.d;
  if (mode == EstimatorMode::unstructured) {
    if (!inst.unstructured())
      throw std::invalid_argument("estimator: unstructured mode needs identity features");
    st.xi_ = 0.0;
    st.diag_design_ = true;
    st.V_ = Eigen::MatrixXd::Identity(h, h);
    st.V_inv_ = st.V_;
    st.Zmom_.resize(h, d);
    for (int i = 0; i < inst.K; ++i) {
      st.Zmom_.row(i) = inst.draw_observation(i, rng).transpose();
      st.counts_[i] = 1;
    }
    st.t_ = inst.K;
    st.theta_hat_ = st.Zmom_;
  } else {
    if (!(xi > 0.0)) throw std::invalid_argument("estimator: structured mode needs xi > 0");
    st.xi_ = xi;
    st.diag_design_ = false;
    st.V_ = xi * Eigen::MatrixXd::Identity(h, h);
    st.V_inv_ = Eigen::MatrixXd::Identity(h, h) / xi;
    st.Zmom_ = Eigen::MatrixXd::Zero(h, d);
    st.theta_hat_ = Eigen::MatrixXd::Zero(h, d);
    st.t_ = 0;
  }
  st.gwork_.resize(h, d);
  return st;
}

void EstimatorState::update(int arm_index, const Eigen::VectorXd& observation) {
  if (arm_index < 0 || arm_index >= static_cast<int>(counts_.size()))
    throw std::out_of_range("estimator update: bad arm index");
  if (observation.size() != inst_->d)
    throw std::invalid_argument("estimator update: observation dimension mismatch");
  const Eigen::VectorXd a = inst_->A.row(arm_index).transpose();
  V_.noalias() += a * a.transpose();
  if (diag_design_) {
    // canonical features keep V diagonal
    V_inv_(arm_index, arm_index) = 1.0 / V_(arm_index, arm_index);
  } else {
    const Eigen::VectorXd Va = V_inv_ * a;
    V_inv_.noalias() -= Va * Va.transpose() / (1.0 + a.dot(Va));
  }
  Zmom_.noalias() += a * observation.transpose();
  if (++updates_since_refresh_ >= 10000) {
    // periodic direct factorization bounds Sherman-Morrison round-off
    V_inv_ = V_.llt().solve(Eigen::MatrixXd::Identity(V_.rows(), V_.cols()));
    updates_since_refresh_ = 0;
  }
  theta_hat_.noalias() = V_inv_ * Zmom_;
  ++counts_[arm_index];
  ++t_;
  chol_valid_ = false;
}

void EstimatorState::refresh_vinv_chol() const {
  if (diag_design_) {
    vinv_chol_diag_ = V_inv_.diagonal().cwiseSqrt();
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(V_inv_);
    if (llt.info() != Eigen::Success) throw std::runtime_error("estimator: V^{-1} not SPD");
    vinv_chol_ = llt.matrixL();
  }
  chol_valid_ = true;
}

void EstimatorState::centered_draw_general(Rng& rng, Eigen::MatrixXd& out) const {
  const int h = inst_->h, d = inst_->d;
  for (int i = 0; i < h; ++i)
    for (int c = 0; c < d; ++c) gwork_(i, c) = rng.normal();
  if (diag_design_) {
    out.noalias() = vinv_chol_diag_.asDiagonal() * gwork_ * inst_->sigma_chol.transpose();
  } else {
    Eigen::MatrixXd scaled = vinv_chol_.triangularView<Eigen::Lower>() * gwork_;
    out.noalias() = scaled * inst_->sigma_chol.transpose();
  }
}

Eigen::MatrixXd EstimatorState::posterior_draw(double scale, Rng& rng) const {
  if (scale < 0.0) throw std::invalid_argument("posterior_draw: scale must be >= 0");
  Eigen::MatrixXd v(inst_->h, inst_->d);
  centered_draw(rng, v);
  return theta_hat_ + std::sqrt(scale) * v;
}

double EstimatorState::mahalanobis(const Eigen::MatrixXd& lambda) const {
  const Eigen::MatrixXd diff = theta_hat_ - lambda;
  return (sigma_inv_ * diff.transpose() * V_ * diff).trace();
}

}  // namespace psips
