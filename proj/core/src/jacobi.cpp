#include "rwam/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/beta.hpp>

#include "rwam/error.hpp"

namespace rwam {

JacobiRecurrence::JacobiRecurrence(double alpha, double beta, int max_degree) : alpha_(alpha), beta_(beta) {
  require(alpha > -1.0 && beta > -1.0, ErrorKind::precondition, "Jacobi parameters must exceed -1");
  require(max_degree >= 0, ErrorKind::precondition, "max degree must be >= 0");
  const double ab = alpha + beta;
  a_.resize(max_degree + 1);
  b_.assign(max_degree + 2, 0.0);
  for (int k = 0; k <= max_degree; ++k) {
    if (k == 0) {
      a_[k] = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      a_[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k <= max_degree + 1; ++k) {
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    b_[k] = std::sqrt(b2);
  }
}

void JacobiRecurrence::eval(double y, std::span<double> values) const {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 0) return;
  values[0] = 1.0;
  if (n == 0) return;
  values[1] = (y - a_[0]) / b_[1];
  for (int k = 1; k < n; ++k) values[k + 1] = ((y - a_[k]) * values[k] - b_[k] * values[k - 1]) / b_[k + 1];
}

void JacobiRecurrence::eval(double y, std::span<double> values, std::span<double> derivs) const {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 0) return;
  values[0] = 1.0;
  derivs[0] = 0.0;
  if (n == 0) return;
  values[1] = (y - a_[0]) / b_[1];
  derivs[1] = 1.0 / b_[1];
  for (int k = 1; k < n; ++k) {
    values[k + 1] = ((y - a_[k]) * values[k] - b_[k] * values[k - 1]) / b_[k + 1];
    derivs[k + 1] = ((y - a_[k]) * derivs[k] + values[k] - b_[k] * derivs[k - 1]) / b_[k + 1];
  }
}

GaussRule gauss_jacobi(double alpha, double beta, int num_nodes) {
  require(num_nodes >= 1, ErrorKind::precondition, "Gauss rule needs at least one node");
  JacobiRecurrence rec(alpha, beta, num_nodes);
  Eigen::VectorXd diag(num_nodes), sub(std::max(num_nodes - 1, 0));
  for (int k = 0; k < num_nodes; ++k) diag[k] = rec.a(k);
  for (int k = 0; k + 1 < num_nodes; ++k) sub[k] = rec.b(k + 1);
  GaussRule rule;
  if (num_nodes == 1) {
    rule.nodes = {diag[0]};
    rule.weights = {1.0};
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes.resize(num_nodes);
  rule.weights.resize(num_nodes);
  for (int k = 0; k < num_nodes; ++k) {
    rule.nodes[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = v0 * v0;
  }
  return rule;
}

double jacobi_cdf(double alpha, double beta, double y) {
  if (y <= -1.0) return 0.0;
  if (y >= 1.0) return 1.0;
  return boost::math::ibeta(beta + 1.0, alpha + 1.0, 0.5 * (y + 1.0));
}

double jacobi_quantile(double alpha, double beta, double u) {
  if (u <= 0.0) return -1.0;
  if (u >= 1.0) return 1.0;
  return 2.0 * boost::math::ibeta_inv(beta + 1.0, alpha + 1.0, u) - 1.0;
}

TabulatedJacobiQuantile::TabulatedJacobiQuantile(double alpha, double beta, int bits) {
  require(bits >= 2 && bits <= 24, ErrorKind::precondition, "quantile table resolution out of range");
  const std::size_t n = std::size_t{1} << bits;
  table_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    table_[i] = jacobi_quantile(alpha, beta, static_cast<double>(i) / static_cast<double>(n));
}

double TabulatedJacobiQuantile::operator()(double u) const noexcept {
  const std::size_t n = table_.size() - 1;
  const double s = std::clamp(u, 0.0, 1.0) * static_cast<double>(n);
  const std::size_t i = std::min(static_cast<std::size_t>(s), n - 1);
  const double t = s - static_cast<double>(i);
  return std::clamp((1.0 - t) * table_[i] + t * table_[i + 1], -1.0, 1.0);
}

}  // namespace rwam
