#include "psips/qp.hpp"

#include <cmath>
#include <stdexcept>

namespace psips {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

namespace {

inline void project_halfspace(Eigen::VectorXd& w, const Halfspace& hs) {
  const double viol = hs.a.dot(w) - hs.b;
  if (viol > 0.0) w -= viol / hs.a.squaredNorm() * hs.a;
}

void project_col_balls(Eigen::VectorXd& w, double radius, int h, int d) {
  for (int c = 0; c < d; ++c) {
    auto seg = w.segment(c * h, h);
    const double n = seg.norm();
    if (n > radius) seg *= radius / n;
  }
}

Eigen::VectorXd dykstra(const Eigen::VectorXd& point, const std::vector<Halfspace>& hs,
                        std::optional<double> ball, int h, int d, int max_sweeps,
                        double tol) {
  const std::size_t m = hs.size() + (ball ? 1 : 0);
  if (m == 0) return point;
  Eigen::VectorXd x = point;
  std::vector<Eigen::VectorXd> corr(m, Eigen::VectorXd::Zero(point.size()));
  Eigen::VectorXd w;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Eigen::VectorXd prev = x;
    for (std::size_t i = 0; i < m; ++i) {
      w = x + corr[i];
      Eigen::VectorXd xn = w;
      if (i < hs.size())
        project_halfspace(xn, hs[i]);
      else
        project_col_balls(xn, *ball, h, d);
      corr[i] = w - xn;
      x = xn;
    }
    double viol = 0.0;
    for (const auto& c : hs) viol = std::max(viol, c.a.dot(x) - c.b);
    if ((x - prev).norm() <= tol * (1.0 + x.norm()) && viol <= tol * (1.0 + x.norm()))
      break;
  }
  return x;
}

}  // namespace

Eigen::VectorXd dykstra_project(const Eigen::VectorXd& point,
                                const std::vector<Halfspace>& halfspaces, int max_sweeps,
                                double tol) {
  return dykstra(point, halfspaces, std::nullopt, 0, 0, max_sweeps, tol);
}

QpResult minimize_quadratic(const Eigen::MatrixXd& metric, const Eigen::VectorXd& center,
                            const std::vector<Halfspace>& halfspaces,
                            std::optional<double> col_ball_radius, int h, int d,
                            double tol) {
  QpResult res;
  if (!col_ball_radius) {
    // whiten: (u-c)^T M (u-c) = ||L^T (u-c)||^2, then project the origin
    Eigen::LLT<Eigen::MatrixXd> llt(metric);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("minimize_quadratic: metric not SPD");
    const Eigen::MatrixXd L = llt.matrixL();
    std::vector<Halfspace> ths(halfspaces.size());
    for (std::size_t i = 0; i < halfspaces.size(); ++i) {
      ths[i].a = L.triangularView<Eigen::Lower>().solve(halfspaces[i].a);
      ths[i].b = halfspaces[i].b - halfspaces[i].a.dot(center);
    }
    const Eigen::VectorXd y =
        dykstra(Eigen::VectorXd::Zero(center.size()), ths, std::nullopt, h, d, 2000, tol);
    res.value = y.squaredNorm();
    res.minimizer =
        center + L.transpose().triangularView<Eigen::Upper>().solve(y);
    return res;
  }
  // projected gradient in the original coordinates
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric);
  const double lipschitz = 2.0 * es.eigenvalues().maxCoeff();
  Eigen::VectorXd u = dykstra(center, halfspaces, col_ball_radius, h, d, 2000, tol);
  double value = (u - center).dot(metric * (u - center));
  res.converged = false;
  for (int it = 0; it < 20000; ++it) {
    const Eigen::VectorXd grad = 2.0 * (metric * (u - center));
    Eigen::VectorXd next = u - grad / lipschitz;
    next = dykstra(next, halfspaces, col_ball_radius, h, d, 200, tol);
    const double next_value = (next - center).dot(metric * (next - center));
    const bool done = std::abs(value - next_value) <= tol * (1.0 + std::abs(value)) &&
                      (next - u).norm() <= std::sqrt(tol) * (1.0 + u.norm());
    u = next;
    value = next_value;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.minimizer = u;
  res.value = value;
  return res;
}

}  // namespace psips
