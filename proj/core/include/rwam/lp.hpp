#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rwam {

/// Solver for max phi.c subject to |B c|_inf <= 1 (B is m x n, m >= n).
///
/// Dual simplex over signed bases: n rows S with signs s such that
/// diag(s) B_S c = 1, kept dual feasible while pivots remove primal
/// violations. Pricing runs over a pool of recently active rows and falls
/// back to a scan of all rows, whose worst violators join the pool. The
/// basis and pool of the previous solve warm-start the next one.
class SupNormLP {
 public:
  explicit SupNormLP(Eigen::MatrixXd B, double feas_tol = 1e-9);

  struct Solution {
    double value = 0.0;
    bool bounded = true;
    int pivots = 0;
  };

  Solution solve(const Eigen::VectorXd& phi);

  /// Weak-duality upper bound on the value for `phi` from the current basis,
  /// O(n^2). Requires a previous solve.
  double upper_bound(const Eigen::VectorXd& phi);

  /// Maximizer of the last bounded solve.
  const Eigen::VectorXd& coefficients() const noexcept { return c_; }
  /// False when B has a nontrivial null space; every objective not
  /// orthogonal to it is then unbounded.
  bool determining() const noexcept { return determining_; }
  /// Unit null vector of B when not determining.
  const Eigen::VectorXd& certificate() const noexcept { return null_; }
  /// Rows selected for the initial basis by column-pivoted QR of B^T.
  const std::vector<int>& initial_rows() const noexcept { return initial_rows_; }

 private:
  static constexpr long kPoolAge = 8;  // solves a row stays pooled after last use
  static constexpr int kRefactorEvery = 64;

  void factor();
  void replace_row(Eigen::Index leave, int enter, double sigma);
  void add_to_pool(int row);
  void gather_pool();
  void prune_pool();

  Eigen::MatrixXd B_;
  double tol_;
  bool determining_ = true;
  Eigen::VectorXd null_;
  std::vector<int> initial_rows_;
  std::vector<int> rows_;
  Eigen::VectorXd signs_;
  Eigen::MatrixXd inv_;  // (diag(s) B_S)^-1
  int since_factor_ = 0;
  Eigen::VectorXd c_, u_, w_, a_, r_, rp_;
  Eigen::VectorXd row_norm_;
  std::vector<int> pool_;
  std::vector<char> in_pool_;
  std::vector<long> last_used_;
  Eigen::MatrixXd Bp_;  // pooled rows of B
  bool pool_dirty_ = true;
  long solves_ = 0;
  std::vector<std::pair<double, int>> violated_;
};

}  // namespace rwam
