#include "psips/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace psips {

using detail::row_dominates;

bool dominates(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dominates: dimension mismatch");
  bool strict = false;
  for (Eigen::Index c = 0; c < u.size(); ++c) {
    if (v[c] > u[c]) return false;
    if (v[c] < u[c]) strict = true;
  }
  return strict;
}

ParetoSet pareto_set_naive(const Eigen::MatrixXd& means) {
  const int n = static_cast<int>(means.rows());
  ParetoSet out;
  for (int i = 0; i < n; ++i) {
    bool dominated = false;
    for (int j = 0; j < n && !dominated; ++j)
      if (j != i && row_dominates(means, j, i)) dominated = true;
    if (!dominated) out.push_back(i);
  }
  return out;
}

namespace {

ParetoSet pareto_set_2d(const Eigen::MatrixXd& mu) {
  const int n = static_cast<int>(mu.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (mu(a, 0) != mu(b, 0)) return mu(a, 0) > mu(b, 0);
    return mu(a, 1) > mu(b, 1);
  });
  ParetoSet out;
  double best_y = -std::numeric_limits<double>::infinity();
  int i = 0;
  while (i < n) {
    // group of equal first coordinate
    int j = i;
    double group_max_y = -std::numeric_limits<double>::infinity();
    while (j < n && mu(idx[j], 0) == mu(idx[i], 0)) {
      group_max_y = std::max(group_max_y, mu(idx[j], 1));
      ++j;
    }
    if (group_max_y > best_y) {
      for (int k = i; k < j; ++k)
        if (mu(idx[k], 1) == group_max_y) out.push_back(idx[k]);
      best_y = group_max_y;
    }
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ParetoSet pareto_set(const Eigen::MatrixXd& means) {
  if (means.rows() < 1) throw std::invalid_argument("pareto_set: empty mean matrix");
  if (means.cols() == 2) return pareto_set_2d(means);
  return pareto_set_naive(means);
}

bool in_alt(const Eigen::MatrixXd& lambda, const ParetoSet& S, const Eigen::MatrixXd& Z) {
  if (S.empty()) throw std::invalid_argument("in_alt: S must be nonempty");
  return in_alt_means(Z * lambda, S);
}

std::vector<AltPiece> alt_pieces(const ParetoSet& S, int num_answers, int d,
                                 long long piece_budget) {
  const int p = static_cast<int>(S.size());
  if (p < 1) throw std::invalid_argument("alt_pieces: S must be nonempty");
  const double promote_count = (num_answers - p) * std::pow(static_cast<double>(d), p);
  if (promote_count > static_cast<double>(piece_budget))
    throw std::runtime_error("alt_pieces: piece count exceeds budget");
  std::vector<AltPiece> pieces;
  pieces.reserve(static_cast<std::size_t>(p * (p - 1) + promote_count));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      if (b != a) {
        AltPiece piece;
        piece.kind = AltPiece::Kind::demote;
        piece.z = S[a];
        piece.x = S[b];
        pieces.push_back(std::move(piece));
      }
  std::vector<bool> member(num_answers, false);
  for (int s : S) member[s] = true;
  std::vector<int> assign(p, 0);
  for (int z = 0; z < num_answers; ++z) {
    if (member[z]) continue;
    std::fill(assign.begin(), assign.end(), 0);
    while (true) {
      AltPiece piece;
      piece.kind = AltPiece::Kind::promote;
      piece.z = z;
      piece.members = S;
      piece.coords = assign;
      pieces.push_back(std::move(piece));
      int k = p - 1;
      while (k >= 0 && assign[k] == d - 1) assign[k--] = 0;
      if (k < 0) break;
      ++assign[k];
    }
  }
  return pieces;
}

bool piece_contains(const AltPiece& piece, const Eigen::MatrixXd& mu, double tol) {
  if (piece.kind == AltPiece::Kind::demote) {
    for (Eigen::Index c = 0; c < mu.cols(); ++c)
      if (mu(piece.z, c) > mu(piece.x, c) + tol) return false;
    return true;
  }
  for (std::size_t j = 0; j < piece.members.size(); ++j) {
    const int c = piece.coords[j];
    if (mu(piece.z, c) < mu(piece.members[j], c) - tol) return false;
  }
  return true;
}

GapSummary gaps(const Eigen::MatrixXd& means) {
  const int n = static_cast<int>(means.rows());
  GapSummary g;
  g.M.resize(n, n);
  g.m.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) {
        g.M(a, b) = 0.0;
        g.m(a, b) = 0.0;
        continue;
      }
      double sq = 0.0;
      double mn = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < means.cols(); ++c) {
        const double diff = means(a, c) - means(b, c);
        if (diff > 0.0) sq += diff * diff;
        mn = std::min(mn, diff);
      }
      g.M(a, b) = std::sqrt(sq);
      g.m(a, b) = mn;
    }
  g.pareto = pareto_set(means);
  std::vector<bool> member(n, false);
  for (int s : g.pareto) member[s] = true;
  const double inf = std::numeric_limits<double>::infinity();
  g.delta1 = inf;
  g.delta2 = inf;
  g.per_arm.resize(n);
  for (int a = 0; a < n; ++a) {
    if (member[a]) {
      double da = inf;
      for (int b = 0; b < n; ++b)
        if (b != a) da = std::min(da, g.M(a, b));
      g.per_arm[a] = da;
      g.delta1 = std::min(g.delta1, da);
    } else {
      double da = -inf;
      for (int s : g.pareto) da = std::max(da, g.m(s, a));
      g.per_arm[a] = da;
      g.delta2 = std::min(g.delta2, da);
    }
  }
  g.delta_min = std::min(g.delta1, g.delta2);
  g.degenerate = !(g.delta_min > 0.0);
  g.complexity_H = 0.0;
  for (int a = 0; a < n; ++a) g.complexity_H += 1.0 / (g.per_arm[a] * g.per_arm[a]);
  return g;
}

GapSummary gaps(const Instance& inst) { return gaps(inst.answer_means()); }

}  // namespace psips
