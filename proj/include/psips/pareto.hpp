#pragma once

#include <Eigen/Dense>
#include <vector>

#include "psips/instance.hpp"

namespace psips {

/// Answer indices, sorted ascending.
using ParetoSet = std::vector<int>;

/// Whether v is Pareto dominated by u (v <= u coordinatewise, one strict).
bool dominates(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Exact Pareto set of an n x d mean matrix. Sort-then-scan in two
/// dimensions, pairwise scan otherwise.
ParetoSet pareto_set(const Eigen::MatrixXd& means);

/// Reference O(n^2 d) pairwise scan; kept as the validation path for the
/// two-dimensional fast path.
ParetoSet pareto_set_naive(const Eigen::MatrixXd& means);

namespace detail {
// Row b dominated by row a: mu(b,.) <= mu(a,.) with one strict coordinate.
inline bool row_dominates(const Eigen::MatrixXd& mu, int a, int b) {
  bool strict = false;
  const double* data = mu.data();
  const Eigen::Index n = mu.rows();
  for (Eigen::Index c = 0; c < mu.cols(); ++c) {
    const double da = data[a + c * n], db = data[b + c * n];
    if (db > da) return false;
    if (db < da) strict = true;
  }
  return strict;
}
}  // namespace detail

/// True iff S*(lambda) != S, decided from the dominance halfspace structure
/// without computing S*(lambda). answer_means is |Z| x d. Inline: this is
/// the per-draw test of the rejection scans.
inline bool in_alt_means(const Eigen::MatrixXd& mu, const ParetoSet& S) {
  const int n = static_cast<int>(mu.rows());
  const int p = static_cast<int>(S.size());
  // a member strictly dominated by another member changes the set
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      if (b != a && detail::row_dominates(mu, S[b], S[a])) return true;
  // a non-member dominated by no member would join the set
  int si = 0;
  for (int z = 0; z < n; ++z) {
    if (si < p && S[si] == z) {
      ++si;
      continue;
    }
    bool covered = false;
    for (int b = 0; b < p && !covered; ++b) covered = detail::row_dominates(mu, S[b], z);
    if (!covered) return true;
  }
  return false;
}

/// Same for a regression matrix lambda (h x d) and answer features Z.
bool in_alt(const Eigen::MatrixXd& lambda, const ParetoSet& S, const Eigen::MatrixXd& Z);

/// One convex piece of alt(S): either one member demoted below another, or a
/// non-member escaping domination through one coordinate per member.
struct AltPiece {
  enum class Kind { demote, promote };
  Kind kind = Kind::demote;
  int z = -1;                // answer being moved
  int x = -1;                // demote: the answer that dominates z
  std::vector<int> members;  // promote: the Pareto-set members
  std::vector<int> coords;   // promote: coordinate assigned per member
};

/// The p(p-1) demote and (|Z|-p) d^p promote pieces whose union is alt(S).
/// Throws when the promote count would exceed piece_budget.
std::vector<AltPiece> alt_pieces(const ParetoSet& S, int num_answers, int d,
                                 long long piece_budget = 1000000);

/// Closure membership of answer means in one piece, with slack tol.
bool piece_contains(const AltPiece& piece, const Eigen::MatrixXd& answer_means,
                    double tol = 0.0);

/// Pairwise margins and the scalar gaps that control identifiability.
struct GapSummary {
  Eigen::MatrixXd M;  // M(a,a') = ||(mu_a - mu_a')_+||_2
  Eigen::MatrixXd m;  // m(a,a') = min_c (mu_a(c) - mu_a'(c))
  ParetoSet pareto;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta_min = 0.0;
  Eigen::VectorXd per_arm;    // margin whose violation changes the set
  double complexity_H = 0.0;  // sum of per-arm gap^-2
  bool degenerate = false;    // delta_min == 0 (duplicated mean vectors)
};

GapSummary gaps(const Eigen::MatrixXd& means);
GapSummary gaps(const Instance& inst);

}  // namespace psips
