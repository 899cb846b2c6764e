#include "rwam/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "rwam/error.hpp"

namespace rwam {

SupNormLP::SupNormLP(Eigen::MatrixXd B, double feas_tol) : B_(std::move(B)), tol_(feas_tol) {
  const Eigen::Index m = B_.rows(), n = B_.cols();
  require(n >= 1, ErrorKind::shape, "LP needs at least one variable");
  if (m < n) {
    determining_ = false;
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B_.transpose());
    qr.setThreshold(1e-11);
    determining_ = qr.rank() == n;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = 0; k < n; ++k) initial_rows_.push_back(perm[k]);
  }
  if (!determining_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B_.transpose() * B_);
    null_ = es.eigenvectors().col(0);
    return;
  }
  row_norm_ = B_.rowwise().norm();
  in_pool_.assign(static_cast<std::size_t>(m), 0);
  last_used_.assign(static_cast<std::size_t>(m), 0);
  rows_ = initial_rows_;
  signs_ = Eigen::VectorXd::Ones(n);
  u_.resize(n);
  w_.resize(n);
  a_.resize(n);
  for (int row : rows_) add_to_pool(row);
  factor();
}

void SupNormLP::add_to_pool(int row) {
  if (in_pool_[static_cast<std::size_t>(row)]) return;
  in_pool_[static_cast<std::size_t>(row)] = 1;
  pool_.push_back(row);
  pool_dirty_ = true;
}

void SupNormLP::gather_pool() {
  if (!pool_dirty_) return;
  std::sort(pool_.begin(), pool_.end());
  Bp_.resize(static_cast<Eigen::Index>(pool_.size()), B_.cols());
  for (std::size_t i = 0; i < pool_.size(); ++i) Bp_.row(static_cast<Eigen::Index>(i)) = B_.row(pool_[i]);
  rp_.resize(Bp_.rows());
  pool_dirty_ = false;
}

void SupNormLP::prune_pool() {
  std::vector<int> kept;
  kept.reserve(pool_.size());
  for (int row : pool_) {
    if (solves_ - last_used_[static_cast<std::size_t>(row)] <= kPoolAge) {
      kept.push_back(row);
    } else {
      in_pool_[static_cast<std::size_t>(row)] = 0;
    }
  }
  if (kept.size() != pool_.size()) {
    pool_.swap(kept);
    pool_dirty_ = true;
  }
}

void SupNormLP::factor() {
  const Eigen::Index n = B_.cols();
  Eigen::MatrixXd Bs(n, n);
  for (Eigen::Index k = 0; k < n; ++k) Bs.row(k) = signs_[k] * B_.row(rows_[k]);
  inv_ = Bs.partialPivLu().inverse();
  c_.noalias() = inv_.rowwise().sum();
  since_factor_ = 0;
}

void SupNormLP::replace_row(Eigen::Index leave, int enter, double sigma) {
  // Sherman-Morrison row replacement; expects w_ = inv_^T a.
  rows_[leave] = enter;
  signs_[leave] = sigma;
  if (++since_factor_ >= kRefactorEvery) {
    factor();
    return;
  }
  const double pivot = w_[leave];
  w_[leave] -= 1.0;
  const Eigen::VectorXd col = inv_.col(leave) / pivot;
  inv_.noalias() -= col * w_.transpose();
  c_.noalias() = inv_.rowwise().sum();
}

double SupNormLP::upper_bound(const Eigen::VectorXd& phi) {
  require(solves_ > 0, ErrorKind::precondition, "upper bound needs a solved basis");
  u_.noalias() = inv_.transpose() * phi;
  return u_.cwiseAbs().sum();
}

SupNormLP::Solution SupNormLP::solve(const Eigen::VectorXd& phi) {
  require(phi.size() == B_.cols(), ErrorKind::shape, "objective length differs from LP width");
  Solution sol;
  if (!determining_) {
    sol.bounded = std::abs(phi.dot(null_)) <= 1e-12 * phi.norm();
    sol.value = sol.bounded ? 0.0 : std::numeric_limits<double>::infinity();
    if (!sol.bounded) return sol;
    fail(ErrorKind::unsupported, "objective orthogonal to the null space of a non-determining mesh");
  }
  ++solves_;
  const Eigen::Index n = B_.cols();
  u_.noalias() = inv_.transpose() * phi;
  bool flipped = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (u_[k] < 0.0) {
      signs_[k] = -signs_[k];
      inv_.col(k) *= -1.0;
      flipped = true;
    }
  }
  if (flipped) {
    c_.noalias() = inv_.rowwise().sum();
    u_ = u_.cwiseAbs();
  }

  const int max_pivots = static_cast<int>(20 * (B_.rows() + n)) + 1000;
  int degenerate = 0;
  bool bland = false;
  for (;;) {
    // Price the pool first; scan every row only once the pool is satisfied.
    gather_pool();
    rp_.noalias() = Bp_ * c_;
    int enter = -1;
    double worst = 0.0, r_enter = 0.0;
    for (Eigen::Index i = 0; i < rp_.size(); ++i) {
      const double a = std::abs(rp_[i]);
      if (a <= 1.0 + tol_) continue;
      const int row = pool_[static_cast<std::size_t>(i)];
      const double score = (a - 1.0) / row_norm_[row];
      if (bland ? (enter < 0 || row < enter) : score > worst) {
        enter = row;
        worst = score;
        r_enter = rp_[i];
      }
    }
    if (enter < 0) {
      r_.noalias() = B_ * c_;
      violated_.clear();
      for (Eigen::Index row = 0; row < r_.size(); ++row) {
        const double a = std::abs(r_[row]);
        if (a > 1.0 + tol_) violated_.emplace_back(-(a - 1.0) / row_norm_[row], static_cast<int>(row));
      }
      if (violated_.empty()) break;
      const std::size_t keep = std::min<std::size_t>(violated_.size(), static_cast<std::size_t>(2 * n));
      std::partial_sort(violated_.begin(), violated_.begin() + static_cast<std::ptrdiff_t>(keep), violated_.end());
      for (std::size_t i = 0; i < keep; ++i) {
        add_to_pool(violated_[i].second);
        last_used_[static_cast<std::size_t>(violated_[i].second)] = solves_;
      }
      continue;
    }
    if (sol.pivots >= max_pivots) fail(ErrorKind::numerical, "LP pivot limit reached");
    const double sigma = r_enter > 0.0 ? 1.0 : -1.0;
    a_ = sigma * B_.row(enter).transpose();
    w_.noalias() = inv_.transpose() * a_;
    Eigen::Index leave = -1;
    double t = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (w_[k] <= 1e-12) continue;
      const double tk = std::max(u_[k], 0.0) / w_[k];
      if (tk < t - 1e-15 || (bland && leave >= 0 && std::abs(tk - t) <= 1e-15 && rows_[k] < rows_[leave])) {
        t = tk;
        leave = k;
      }
    }
    if (leave < 0) fail(ErrorKind::numerical, "LP ratio test found no leaving row");
    degenerate = t <= 1e-14 ? degenerate + 1 : 0;
    if (degenerate > 50) bland = true;
    last_used_[static_cast<std::size_t>(enter)] = solves_;
    replace_row(leave, enter, sigma);
    u_.noalias() = inv_.transpose() * phi;
    ++sol.pivots;
  }
  for (int row : rows_) last_used_[static_cast<std::size_t>(row)] = solves_;
  prune_pool();
  sol.value = phi.dot(c_);
  return sol;
}

}  // namespace rwam
