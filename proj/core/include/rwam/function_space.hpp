#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rwam/domain.hpp"
#include "rwam/index_set.hpp"
#include "rwam/jacobi.hpp"
#include "rwam/quadrature.hpp"

namespace rwam {

enum class Family { jacobi, exponential, custom };

std::string_view to_string(Family f) noexcept;

/// Base probability measure mu: the product of Jacobi(alpha, beta)
/// measures on the box axes. alpha = beta = 0 is the uniform measure.
struct BaseMeasure {
  double alpha = 0.0;
  double beta = 0.0;
  bool is_uniform() const noexcept { return alpha == 0.0 && beta == 0.0; }
};

/// Gradients at M points: one (M x N) matrix per coordinate axis.
using RealGradient = std::vector<Eigen::MatrixXd>;
using ComplexGradient = std::vector<Eigen::MatrixXcd>;

/// Finite-dimensional space V spanned by an L^2_mu orthonormal basis
/// v_1..v_N on a box. Instances are immutable and safe to share between
/// threads.
class FunctionSpace {
 public:
  FunctionSpace(Box domain, BaseMeasure measure, std::size_t size, int level);
  virtual ~FunctionSpace() = default;
  FunctionSpace(const FunctionSpace&) = delete;
  FunctionSpace& operator=(const FunctionSpace&) = delete;

  virtual Family family() const noexcept = 0;
  virtual std::string description() const = 0;

  const Box& domain() const noexcept { return domain_; }
  const BaseMeasure& measure() const noexcept { return measure_; }
  int dim() const noexcept { return domain_.dim(); }
  std::size_t size() const noexcept { return size_; }
  int level() const noexcept { return level_; }

  virtual bool is_complex() const noexcept { return false; }
  virtual bool has_gradient() const noexcept { return true; }

  /// (M x N) basis values. Throws a domain error for points outside D.
  Eigen::MatrixXd eval_real(const PointSet& points) const;
  Eigen::MatrixXcd eval(const PointSet& points) const;
  RealGradient eval_grad_real(const PointSet& points) const;
  ComplexGradient eval_grad(const PointSet& points) const;

  /// Rows of eval() scaled by sqrt(lambda(x)); the weighted space W.
  Eigen::MatrixXcd eval_weighted(const PointSet& points) const;

  /// K(x, x) = sum_i |v_i(x)|^2.
  Eigen::VectorXd kernel_diag(const PointSet& points) const;
  /// lambda(x) = N / K(x, x).
  Eigen::VectorXd christoffel(const PointSet& points) const;
  /// R(x)^2 = sum_i |grad v_i(x)|^2.
  Eigen::VectorXd grad_norm_sq(const PointSet& points) const;

  /// K(x,x) and R(x)^2 on every point of a tensor grid.
  virtual void profile_on_grid(const TensorGrid& grid, Eigen::VectorXd& kernel, Eigen::VectorXd& grad_sq) const;

  /// Exact sup of K(x,x) when known in closed form.
  virtual std::optional<double> exact_kernel_max() const { return std::nullopt; }
  /// Exact sup of R(x) when known in closed form.
  virtual std::optional<double> exact_grad_max() const { return std::nullopt; }

  /// Quadrature under which the basis is orthonormal (exact for the
  /// analytic families).
  virtual Quadrature reference_quadrature() const = 0;

 protected:
  virtual Eigen::MatrixXd eval_real_impl(const PointSet& points) const;
  virtual Eigen::MatrixXcd eval_complex_impl(const PointSet& points) const;
  virtual RealGradient grad_real_impl(const PointSet& points) const;
  virtual ComplexGradient grad_complex_impl(const PointSet& points) const;

 private:
  Box domain_;
  BaseMeasure measure_;
  std::size_t size_;
  int level_;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

/// Tensor products of orthonormal Jacobi polynomials, affinely mapped from
/// [-1, 1] to the box axes.
class TensorJacobiSpace final : public FunctionSpace {
 public:
  TensorJacobiSpace(Box domain, IndexSet indices, double alpha, double beta);

  Family family() const noexcept override { return Family::jacobi; }
  std::string description() const override;
  const IndexSet& index_set() const noexcept { return indices_; }
  double alpha() const noexcept { return measure().alpha; }
  double beta() const noexcept { return measure().beta; }
  const JacobiRecurrence& recurrence() const noexcept { return rec_; }

  /// Reference coordinate y in [-1, 1] of x_j.
  double to_reference(int axis, double x) const noexcept;

  void profile_on_grid(const TensorGrid& grid, Eigen::VectorXd& kernel, Eigen::VectorXd& grad_sq) const override;
  std::optional<double> exact_kernel_max() const override;
  Quadrature reference_quadrature() const override;

 protected:
  Eigen::MatrixXd eval_real_impl(const PointSet& points) const override;
  RealGradient grad_real_impl(const PointSet& points) const override;

 private:
  IndexSet indices_;
  JacobiRecurrence rec_;
};

/// exp(2 pi i f.t) with t = (x - lower) / width, orthonormal for the uniform
/// probability measure on the box.
class ExponentialSpace final : public FunctionSpace {
 public:
  ExponentialSpace(Box domain, std::vector<std::vector<int>> frequencies, int level);

  Family family() const noexcept override { return Family::exponential; }
  std::string description() const override;
  bool is_complex() const noexcept override { return true; }
  const std::vector<std::vector<int>>& frequencies() const noexcept { return freqs_; }

  void profile_on_grid(const TensorGrid& grid, Eigen::VectorXd& kernel, Eigen::VectorXd& grad_sq) const override;
  std::optional<double> exact_kernel_max() const override { return static_cast<double>(size()); }
  std::optional<double> exact_grad_max() const override { return std::sqrt(grad_sq_); }
  Quadrature reference_quadrature() const override;

 protected:
  Eigen::MatrixXcd eval_complex_impl(const PointSet& points) const override;
  ComplexGradient grad_complex_impl(const PointSet& points) const override;

 private:
  std::vector<std::vector<int>> freqs_;
  double grad_sq_ = 0.0;
};

/// Real-valued raw function and optional gradient, evaluated at one point.
using RawFunction = std::function<double(std::span<const double>)>;
using RawGradient = std::function<void(std::span<const double>, std::span<double>)>;

/// Space spanned by user-supplied functions, orthonormalized against a
/// quadrature for the base measure. Basis i is sum_k coeffs(k, i) raw_k.
class CustomSpace final : public FunctionSpace {
 public:
  CustomSpace(Box domain, BaseMeasure measure, std::vector<RawFunction> raw, std::vector<RawGradient> raw_grad,
              Quadrature quadrature, Eigen::MatrixXd coeffs, int level, std::string name);

  Family family() const noexcept override { return Family::custom; }
  std::string description() const override { return name_; }
  bool has_gradient() const noexcept override { return !raw_grad_.empty(); }
  const Eigen::MatrixXd& coefficients() const noexcept { return coeffs_; }
  Quadrature reference_quadrature() const override { return quad_; }

 protected:
  Eigen::MatrixXd eval_real_impl(const PointSet& points) const override;
  RealGradient grad_real_impl(const PointSet& points) const override;

 private:
  std::vector<RawFunction> raw_;
  std::vector<RawGradient> raw_grad_;
  Quadrature quad_;
  Eigen::MatrixXd coeffs_;
  std::string name_;
};

/// Modified Gram-Schmidt with one reorthogonalization pass on the weighted
/// quadrature values of `raw`. A function whose remaining norm falls below
/// 1e-10 times the largest remaining norm raises a rank error naming it.
std::shared_ptr<const CustomSpace> orthonormalize_custom(const Box& domain, const BaseMeasure& measure,
                                                         std::vector<RawFunction> raw,
                                                         std::vector<RawGradient> raw_grad,
                                                         const Quadrature& quadrature, int level = 0,
                                                         std::string name = "custom");

/// Graded order of {-n..n}^d: max-norm first, then lexicographic.
std::vector<std::vector<int>> cube_frequencies(int n, int d);

std::shared_ptr<const TensorJacobiSpace> tensor_jacobi_space(const Box& box, int n, double alpha, double beta);
std::shared_ptr<const TensorJacobiSpace> tensor_chebyshev_space(const Box& box, int n);
std::shared_ptr<const TensorJacobiSpace> tensor_legendre_space(const Box& box, int n);
std::shared_ptr<const ExponentialSpace> exponential_space(const Box& box, int n);
/// Monomials of total degree <= n in the reference coordinates,
/// orthonormalized under tensor Gauss-Jacobi quadrature.
std::shared_ptr<const CustomSpace> custom_monomial_space(const Box& box, int n, double alpha, double beta);

/// Recipe for the hierarchy V_0, V_1, ... of one family.
struct SpaceSpec {
  std::string family = "chebyshev";  // jacobi | chebyshev | legendre | exponential | custom-monomial
  int dim = 1;
  std::vector<double> lower;  // default [0,1]^d for exponentials, [-1,1]^d otherwise
  std::vector<double> upper;
  double alpha = 0.0;
  double beta = 0.0;
  /// Explicit index list; overrides the total-degree set when nonempty.
  std::vector<MultiIndex> indices;

  Box box() const;
};

/// Level-n member of the hierarchy described by `spec`.
SpacePtr make_space(const SpaceSpec& spec, int n);

}  // namespace rwam
