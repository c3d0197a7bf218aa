#pragma once

#include <Eigen/Dense>
#include <vector>

#include "psips/instance.hpp"
#include "psips/rng.hpp"

namespace psips {

enum class EstimatorMode { unstructured, structured };

/// Flat, reusable store of centered posterior draws shared between the
/// stopping scan and the min learner within one round.
class DrawBuffer {
 public:
  void reset(int h, int d, int cap) {
    h_ = h;
    d_ = d;
    cap_ = cap;
    count_ = 0;
    if (static_cast<long long>(data_.size()) < static_cast<long long>(h) * d * cap)
      data_.resize(static_cast<std::size_t>(h) * d * cap);
  }
  bool full() const { return count_ >= cap_; }
  int count() const { return count_; }
  void push(const Eigen::MatrixXd& v) {
    std::copy(v.data(), v.data() + static_cast<std::size_t>(h_) * d_,
              data_.data() + static_cast<std::size_t>(count_) * h_ * d_);
    ++count_;
  }
  Eigen::Map<const Eigen::MatrixXd> at(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * h_ * d_, h_, d_};
  }

 private:
  std::vector<double> data_;
  int h_ = 0, d_ = 0, count_ = 0, cap_ = 0;
};

/// Sufficient statistics of a run: regularized least squares with rank-one
/// design updates and Kronecker-structured posterior draws.
class EstimatorState {
 public:
  static EstimatorState init(const Instance& inst, EstimatorMode mode, Rng& rng,
                             double xi = 1.0);

  void update(int arm_index, const Eigen::VectorXd& observation);

  /// Draw with vec(result) ~ N(vec(theta_hat), scale * Sigma (x) V^{-1});
  /// never materializes the hd x hd covariance.
  Eigen::MatrixXd posterior_draw(double scale, Rng& rng) const;

  /// Centered draw v ~ N(0, Sigma (x) V^{-1}) written into out (h x d).
  /// Inline: this sits under the rejection scans.
  void centered_draw(Rng& rng, Eigen::MatrixXd& out) const {
    if (!chol_valid_) refresh_vinv_chol();
    const int h = static_cast<int>(out.rows());
    const int d = static_cast<int>(out.cols());
    const double* ls = sigma_chol_data_;
    if (diag_design_ && d <= 16) {
      // rows are independent: scale a normal row, rotate by the Cholesky
      const double* dv = vinv_chol_diag_.data();
      double* od = out.data();
      double g[16];
      for (int i = 0; i < h; ++i) {
        for (int c = 0; c < d; ++c) g[c] = rng.normal() * dv[i];
        for (int c = 0; c < d; ++c) {
          double acc = 0.0;
          for (int j = 0; j <= c; ++j) acc += g[j] * ls[c + j * d];
          od[i + c * h] = acc;
        }
      }
      return;
    }
    centered_draw_general(rng, out);
  }

  /// vec(theta_hat - lambda)^T (Sigma^{-1} (x) V) vec(theta_hat - lambda).
  double mahalanobis(const Eigen::MatrixXd& lambda) const;

  const Eigen::MatrixXd& V() const { return V_; }
  const Eigen::MatrixXd& V_inv() const { return V_inv_; }
  const Eigen::MatrixXd& cross_moment() const { return Zmom_; }
  const Eigen::MatrixXd& theta_hat() const { return theta_hat_; }
  const std::vector<long long>& counts() const { return counts_; }
  long long t() const { return t_; }
  const Instance& instance() const { return *inst_; }
  EstimatorMode mode() const { return mode_; }
  double xi() const { return xi_; }
  const Eigen::MatrixXd& sigma_inv() const { return sigma_inv_; }

  /// ||a||^2_{V^{-1}} for a feature vector.
  double feature_norm2_vinv(const Eigen::VectorXd& a) const { return a.dot(V_inv_ * a); }

 private:
  const Instance* inst_ = nullptr;
  EstimatorMode mode_ = EstimatorMode::unstructured;
  double xi_ = 0.0;
  bool diag_design_ = false;  // unstructured: V stays diagonal
  Eigen::MatrixXd V_, V_inv_, Zmom_, theta_hat_;
  Eigen::MatrixXd sigma_inv_;
  std::vector<long long> counts_;
  long long t_ = 0;
  int updates_since_refresh_ = 0;

  const double* sigma_chol_data_ = nullptr;
  mutable bool chol_valid_ = false;
  mutable Eigen::MatrixXd vinv_chol_;     // lower L with L L^T = V^{-1}
  mutable Eigen::VectorXd vinv_chol_diag_;  // diagonal fast path
  mutable Eigen::MatrixXd gwork_;         // h x d normals workspace

  void refresh_vinv_chol() const;
  void centered_draw_general(Rng& rng, Eigen::MatrixXd& out) const;
};

}  // namespace psips
