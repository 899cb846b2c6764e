#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "rwam/function_space.hpp"
#include "rwam/quadrature.hpp"

namespace rwam {

/// Resolution rule for evaluation grids: spacing chosen so that
/// covering_radius * R_mu <= target_hr, subject to a cap on the number of
/// grid points. The achieved product is reported, never hidden.
struct GridSpec {
  double target_hr = 0.05;
  std::size_t max_points = std::size_t{1} << 20;
  int coarse_per_axis = 65;
  /// Explicit resolution; bypasses the rule when nonempty.
  std::vector<int> points_per_axis;
};

struct KernelProfile {
  TensorGrid grid;
  Eigen::VectorXd kernel_diag;  // K(x, x)
  Eigen::VectorXd christoffel;  // lambda(x) = N / K(x, x)
  Eigen::VectorXd grad_norm;    // R(x)
  std::size_t N = 0;
  double K_mu = 0.0;  // grid max of K (or exact)
  double R_mu = 0.0;  // grid max of R (or exact)
  double R_min = 0.0;
  bool K_exact = false;
  bool R_exact = false;
  double h = 0.0;   // grid covering radius
  double hR = 0.0;  // h * R_mu

  /// Lipschitz inflation 1 + h R_mu applied to grid maxima.
  double inflation() const noexcept { return 1.0 + hR; }
  /// Upper estimate of sup K used in sample-count formulas.
  double K_upper() const noexcept { return K_exact ? K_mu : inflation() * K_mu; }
  double R_upper() const noexcept { return R_exact ? R_mu : inflation() * R_mu; }
  double lambda_min() const noexcept { return christoffel.minCoeff(); }
  double lambda_max() const noexcept { return christoffel.maxCoeff(); }
};

/// Grid obeying `spec` for a space whose gradient sup is about `r_estimate`.
TensorGrid resolve_grid(const Box& box, const GridSpec& spec, double r_estimate);

/// Builds a coarse grid, estimates R_mu, refines per `spec`, and tabulates
/// K, lambda and R on the refined grid.
KernelProfile kernel_profile(const FunctionSpace& space, const GridSpec& spec = {});

/// Profile on a fixed grid (no refinement).
KernelProfile kernel_profile_on(const FunctionSpace& space, const TensorGrid& grid);

}  // namespace rwam
