#pragma once

#include <span>
#include <vector>

namespace rwam {

/// Univariate polynomials orthonormal in L^2 of the Jacobi probability
/// measure on [-1, 1] with density proportional to (1-y)^alpha (1+y)^beta.
///
/// The three-term recurrence is
///   y p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1},   p_0 = 1,
/// so that the Jacobi matrix with diagonal a and off-diagonal b gives the
/// Gauss nodes directly.
class JacobiRecurrence {
 public:
  JacobiRecurrence(double alpha, double beta, int max_degree);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  int max_degree() const noexcept { return static_cast<int>(a_.size()) - 1; }

  /// a_k for k in [0, max_degree].
  double a(int k) const { return a_[k]; }
  /// b_k for k in [1, max_degree + 1]; b_0 is unused and stored as 0.
  double b(int k) const { return b_[k]; }

  /// Values p_0..p_n(y) written to `values` (size n+1).
  void eval(double y, std::span<double> values) const;
  /// Values and first derivatives d/dy.
  void eval(double y, std::span<double> values, std::span<double> derivs) const;

 private:
  double alpha_, beta_;
  std::vector<double> a_, b_;
};

/// Gauss rule for the Jacobi probability measure (weights sum to 1).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_jacobi(double alpha, double beta, int num_nodes);

/// Inverse CDF of the Jacobi probability measure tabulated at 2^bits + 1
/// equispaced probability levels and evaluated by linear interpolation.
class TabulatedJacobiQuantile {
 public:
  TabulatedJacobiQuantile(double alpha, double beta, int bits = 14);
  double operator()(double u) const noexcept;

 private:
  std::vector<double> table_;
};

/// Exact CDF on [-1, 1]; used by oracles and by goodness-of-fit tests.
double jacobi_cdf(double alpha, double beta, double y);
/// Exact quantile on [-1, 1].
double jacobi_quantile(double alpha, double beta, double u);

}  // namespace rwam
