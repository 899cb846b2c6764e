#include "rwam/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwam/error.hpp"

namespace rwam {

Box::Box(std::vector<double> lower, std::vector<double> upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(!lower_.empty(), ErrorKind::precondition, "box must have dimension >= 1");
  require(lower_.size() == upper_.size(), ErrorKind::precondition, "box bounds have different lengths");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    require(std::isfinite(lower_[j]) && std::isfinite(upper_[j]), ErrorKind::precondition,
            "box bounds must be finite");
    require(lower_[j] < upper_[j], ErrorKind::precondition,
            "box lower bound must be < upper bound on axis " + std::to_string(j));
  }
}

Box Box::unit_cube(int d) { return Box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)); }

Box Box::symmetric(int d) { return Box(std::vector<double>(d, -1.0), std::vector<double>(d, 1.0)); }

double Box::min_width() const noexcept {
  double w = width(0);
  for (int j = 1; j < dim(); ++j) w = std::min(w, width(j));
  return w;
}

double Box::volume() const noexcept {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= width(j);
  return v;
}

double Box::diameter() const noexcept {
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) s += width(j) * width(j);
  return std::sqrt(s);
}

bool Box::contains(std::span<const double> x) const noexcept {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    const double tol = 1e-12 * width(j);
    if (!(x[j] >= lower_[j] - tol && x[j] <= upper_[j] + tol)) return false;
  }
  return true;
}

void Box::check_points(const PointSet& points) const {
  if (points.cols() != dim())
    fail(ErrorKind::domain, "points have dimension " + std::to_string(points.cols()) + ", domain has " +
                                std::to_string(dim()));
  std::vector<double> x(dim());
  for (Eigen::Index m = 0; m < points.rows(); ++m) {
    for (int j = 0; j < dim(); ++j) x[j] = points(m, j);
    if (!contains(x)) {
      std::ostringstream os;
      os << "point " << m << " (";
      for (int j = 0; j < dim(); ++j) os << (j ? ", " : "") << x[j];
      os << ") lies outside the domain";
      fail(ErrorKind::domain, os.str());
    }
  }
}

}  // namespace rwam
