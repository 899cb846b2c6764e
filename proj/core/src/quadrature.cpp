#include "rwam/quadrature.hpp"

#include <cmath>

#include "rwam/error.hpp"
#include "rwam/jacobi.hpp"

namespace rwam {

namespace {

// Tensorizes per-axis (node, weight) lists into a product rule.
Quadrature tensorize(const std::vector<std::vector<double>>& nodes, const std::vector<std::vector<double>>& weights) {
  const int d = static_cast<int>(nodes.size());
  std::size_t total = 1;
  for (const auto& a : nodes) total *= a.size();
  Quadrature q;
  q.nodes.resize(static_cast<Eigen::Index>(total), d);
  q.weights.resize(static_cast<Eigen::Index>(total));
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t g = 0; g < total; ++g) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      q.nodes(static_cast<Eigen::Index>(g), j) = nodes[j][idx[j]];
      w *= weights[j][idx[j]];
    }
    q.weights[static_cast<Eigen::Index>(g)] = w;
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < nodes[j].size()) break;
      idx[j] = 0;
    }
  }
  return q;
}

}  // namespace

Quadrature tensor_gauss_jacobi(const Box& box, double alpha, double beta, int per_axis) {
  const GaussRule rule = gauss_jacobi(alpha, beta, per_axis);
  std::vector<std::vector<double>> nodes(box.dim()), weights(box.dim(), rule.weights);
  for (int j = 0; j < box.dim(); ++j) {
    nodes[j].resize(rule.nodes.size());
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      nodes[j][k] = box.lower(j) + 0.5 * (rule.nodes[k] + 1.0) * box.width(j);
  }
  return tensorize(nodes, weights);
}

Quadrature tensor_trapezoid(const Box& box, int per_axis) {
  require(per_axis >= 1, ErrorKind::precondition, "trapezoid rule needs at least one node");
  std::vector<std::vector<double>> nodes(box.dim()), weights(box.dim(), std::vector<double>(per_axis, 1.0 / per_axis));
  for (int j = 0; j < box.dim(); ++j) {
    nodes[j].resize(per_axis);
    for (int k = 0; k < per_axis; ++k) nodes[j][k] = box.lower(j) + box.width(j) * k / per_axis;
  }
  return tensorize(nodes, weights);
}

TensorGrid::TensorGrid(const Box& box, std::vector<int> points_per_axis) {
  require(static_cast<int>(points_per_axis.size()) == box.dim(), ErrorKind::precondition,
          "grid resolution has wrong dimension");
  axes_.resize(box.dim());
  size_ = 1;
  for (int j = 0; j < box.dim(); ++j) {
    const int n = points_per_axis[j];
    require(n >= 2, ErrorKind::precondition, "grid needs at least two points per axis");
    axes_[j].resize(n);
    for (int k = 0; k < n; ++k) axes_[j][k] = box.lower(j) + box.width(j) * k / (n - 1);
    axes_[j][n - 1] = box.upper(j);
    size_ *= static_cast<std::size_t>(n);
  }
}

double TensorGrid::spacing(int j) const { return axes_[j][1] - axes_[j][0]; }

double TensorGrid::covering_radius() const noexcept {
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) s += 0.25 * spacing(j) * spacing(j);
  return std::sqrt(s);
}

void TensorGrid::unflatten(std::size_t g, std::vector<int>& idx) const {
  idx.resize(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    const std::size_t n = axes_[j].size();
    idx[j] = static_cast<int>(g % n);
    g /= n;
  }
}

void TensorGrid::point(std::size_t g, std::span<double> x) const {
  for (int j = dim() - 1; j >= 0; --j) {
    const std::size_t n = axes_[j].size();
    x[j] = axes_[j][g % n];
    g /= n;
  }
}

PointSet TensorGrid::points() const {
  PointSet p(static_cast<Eigen::Index>(size_), dim());
  std::vector<double> x(dim());
  for (std::size_t g = 0; g < size_; ++g) {
    point(g, x);
    for (int j = 0; j < dim(); ++j) p(static_cast<Eigen::Index>(g), j) = x[j];
  }
  return p;
}

}  // namespace rwam
