#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace rwam {

/// Points are stored one per row: an (M x d) matrix.
using PointSet = Eigen::MatrixXd;

/// Compact axis-aligned box with nonempty interior.
class Box {
 public:
  Box() = default;
  Box(std::vector<double> lower, std::vector<double> upper);

  static Box unit_cube(int d);
  static Box symmetric(int d);  // [-1, 1]^d

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  double width(int j) const { return upper_[j] - lower_[j]; }
  double min_width() const noexcept;
  double volume() const noexcept;
  double diameter() const noexcept;
  /// Radius of the smallest ball containing the box.
  double circumradius() const noexcept { return 0.5 * diameter(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  /// Membership with a relative tolerance of 1e-12 per axis.
  bool contains(std::span<const double> x) const noexcept;
  /// Throws a domain error naming the offending row.
  void check_points(const PointSet& points) const;

  bool operator==(const Box&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace rwam
