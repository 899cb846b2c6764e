#include "rwam/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "rwam/error.hpp"

namespace rwam {

namespace {

std::size_t product(const std::vector<int>& n) {
  std::size_t p = 1;
  for (int v : n) p *= static_cast<std::size_t>(v);
  return p;
}

// Largest per-axis count such that count^d <= max_points.
int cap_per_axis(std::size_t max_points, int d) {
  int n = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(max_points), 1.0 / d))));
  while (n > 2 && std::pow(static_cast<double>(n), d) > static_cast<double>(max_points)) --n;
  return n;
}

}  // namespace

TensorGrid resolve_grid(const Box& box, const GridSpec& spec, double r_estimate) {
  const int d = box.dim();
  if (!spec.points_per_axis.empty()) return TensorGrid(box, spec.points_per_axis);
  require(spec.max_points >= (std::size_t{1} << d), ErrorKind::precondition, "grid point cap below 2^d");
  require(spec.target_hr > 0.0, ErrorKind::precondition, "grid target h*R must be positive");
  std::vector<int> n(d);
  if (!(r_estimate > 0.0)) {
    std::fill(n.begin(), n.end(), std::min(spec.coarse_per_axis, cap_per_axis(spec.max_points, d)));
    return TensorGrid(box, n);
  }
  // Equal spacing on all axes with covering radius sqrt(d) * step / 2.
  const double step = 2.0 * spec.target_hr / (r_estimate * std::sqrt(static_cast<double>(d)));
  for (int j = 0; j < d; ++j) {
    const double want = std::ceil(box.width(j) / step) + 1.0;
    n[j] = static_cast<int>(std::min(want, 1e9));
    n[j] = std::max(n[j], 2);
  }
  if (product(n) > spec.max_points) {
    const double s = std::pow(static_cast<double>(spec.max_points) / static_cast<double>(product(n)), 1.0 / d);
    for (int j = 0; j < d; ++j) n[j] = std::max(2, static_cast<int>(std::floor((n[j] - 1) * s)) + 1);
    while (product(n) > spec.max_points) {
      const auto it = std::max_element(n.begin(), n.end());
      --*it;
    }
  }
  return TensorGrid(box, n);
}

KernelProfile kernel_profile_on(const FunctionSpace& space, const TensorGrid& grid) {
  require(grid.size() > 0, ErrorKind::precondition, "empty evaluation grid");
  KernelProfile p;
  p.grid = grid;
  p.N = space.size();
  Eigen::VectorXd grad_sq;
  space.profile_on_grid(grid, p.kernel_diag, grad_sq);
  p.christoffel = p.kernel_diag.cwiseInverse() * static_cast<double>(p.N);
  p.grad_norm = grad_sq.cwiseMax(0.0).cwiseSqrt();
  p.K_mu = p.kernel_diag.maxCoeff();
  p.R_mu = p.grad_norm.maxCoeff();
  p.R_min = p.grad_norm.minCoeff();
  if (const auto k = space.exact_kernel_max()) {
    p.K_mu = std::max(p.K_mu, *k);
    p.K_exact = true;
  }
  if (const auto r = space.exact_grad_max()) {
    p.R_mu = std::max(p.R_mu, *r);
    p.R_exact = true;
  }
  p.h = grid.covering_radius();
  p.hR = p.h * p.R_mu;
  return p;
}

KernelProfile kernel_profile(const FunctionSpace& space, const GridSpec& spec) {
  if (!spec.points_per_axis.empty()) return kernel_profile_on(space, TensorGrid(space.domain(), spec.points_per_axis));
  GridSpec coarse = spec;
  coarse.max_points = std::min<std::size_t>(spec.max_points, std::size_t{1} << 16);
  const int d = space.dim();
  const TensorGrid g0(space.domain(), std::vector<int>(d, std::min(spec.coarse_per_axis, cap_per_axis(coarse.max_points, d))));
  const KernelProfile p0 = kernel_profile_on(space, g0);
  return kernel_profile_on(space, resolve_grid(space.domain(), spec, p0.R_mu));
}

}  // namespace rwam
