#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rwam/domain.hpp"

namespace rwam {

/// Discrete probability measure: nodes (one per row) with weights summing
/// to 1.
struct Quadrature {
  PointSet nodes;
  Eigen::VectorXd weights;
};

/// Tensor Gauss-Jacobi rule for the product Jacobi(alpha, beta) probability
/// measure on `box`, `per_axis` nodes on every axis.
Quadrature tensor_gauss_jacobi(const Box& box, double alpha, double beta, int per_axis);

/// Equal-weight periodic trapezoid rule on `box` (left endpoints).
Quadrature tensor_trapezoid(const Box& box, int per_axis);

/// Equispaced tensor grid including both endpoints on every axis. Flat
/// indices run with the last axis fastest.
class TensorGrid {
 public:
  TensorGrid() = default;
  TensorGrid(const Box& box, std::vector<int> points_per_axis);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<double>& axis(int j) const { return axes_[j]; }
  int points_on_axis(int j) const { return static_cast<int>(axes_[j].size()); }
  /// Spacing along axis j.
  double spacing(int j) const;
  /// Largest distance from a point of the box to the nearest grid point.
  double covering_radius() const noexcept;

  /// Multi-index of flat index g.
  void unflatten(std::size_t g, std::vector<int>& idx) const;
  void point(std::size_t g, std::span<double> x) const;
  PointSet points() const;

 private:
  std::vector<std::vector<double>> axes_;
  std::size_t size_ = 0;
};

}  // namespace rwam
