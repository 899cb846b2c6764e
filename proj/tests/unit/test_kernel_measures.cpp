#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rwam/function_space.hpp"
#include "rwam/jacobi.hpp"
#include "rwam/kernel.hpp"
#include "rwam/measures.hpp"
#include "rwam/quadrature.hpp"

using namespace rwam;

namespace {

/// Kolmogorov-Smirnov statistic of samples against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

std::vector<double> column(const PointSet& p, int j) {
  return std::vector<double>(p.col(j).data(), p.col(j).data() + p.rows());
}

// 1.63 / sqrt(n) is the 1% critical value.
double ks_limit(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

}  // namespace

TEST_CASE("tensor grid geometry") {
  const TensorGrid g(Box({0.0, -1.0}, {1.0, 1.0}), {5, 3});
  CHECK(g.size() == 15);
  CHECK(g.spacing(0) == doctest::Approx(0.25));
  CHECK(g.spacing(1) == doctest::Approx(1.0));
  CHECK(g.covering_radius() == doctest::Approx(std::hypot(0.125, 0.5)));
  std::vector<int> idx;
  g.unflatten(7, idx);
  CHECK(idx == std::vector<int>{2, 1});
  std::vector<double> x(2);
  g.point(7, x);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(0.0));
}

TEST_CASE("Chebyshev profile: exact K at the corner and Lipschitz inflation") {
  for (int n : {1, 3, 6}) {
    auto s = tensor_chebyshev_space(Box::symmetric(1), n);
    const KernelProfile p = kernel_profile(*s);
    CHECK(p.K_exact);
    CHECK(p.K_mu == doctest::Approx(2.0 * n + 1.0));
    CHECK(p.kernel_diag.maxCoeff() <= p.K_mu + 1e-9);
    CHECK(p.K_upper() == p.K_mu);
    CHECK(p.hR == doctest::Approx(p.h * p.R_mu));
    CHECK(p.lambda_min() == doctest::Approx(static_cast<double>(p.N) / p.K_mu));
    // Markov: sup |p'| for degree n Chebyshev-orthonormal gives R_mu of order n^2.
    CHECK(p.R_mu > n * n * 0.5);
  }
}

TEST_CASE("resolve_grid honours explicit resolutions and caps") {
  GridSpec spec;
  spec.points_per_axis = {4, 6};
  const TensorGrid g = resolve_grid(Box::unit_cube(2), spec, 100.0);
  CHECK(g.points_on_axis(0) == 4);
  CHECK(g.points_on_axis(1) == 6);
  GridSpec capped;
  capped.max_points = 400;
  const TensorGrid c = resolve_grid(Box::unit_cube(2), capped, 1e6);
  CHECK(c.size() <= 400);
}

TEST_CASE("mu sampler draws the arcsine law for Chebyshev") {
  auto s = tensor_chebyshev_space(Box::symmetric(1), 4);
  const SampleRun run = sample_mu(*s, 4000, 17);
  const double ks = ks_statistic(column(run.points, 0), [](double y) { return 1.0 - std::acos(y) / std::numbers::pi; });
  CHECK(ks < ks_limit(4000));
}

TEST_CASE("induced sampler on exponentials is uniform") {
  auto s = exponential_space(Box::unit_cube(1), 5);
  const SampleRun run = sample_induced(s, 4000, 5);
  CHECK(ks_statistic(column(run.points, 0), [](double t) { return t; }) < ks_limit(4000));
}

TEST_CASE("induced sampler matches K/N dmu moments") {
  const int n = 5;
  auto s = tensor_chebyshev_space(Box::symmetric(1), n);
  const std::size_t count = 20000;
  const SampleRun run = sample_induced(s, count, 99);
  CHECK(run.diagnostics.accepts == count);
  CHECK(run.diagnostics.rate() > 0.0);
  const GaussRule g = gauss_jacobi(-0.5, -0.5, n + 4);
  PointSet nodes(static_cast<Eigen::Index>(g.nodes.size()), 1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) nodes(static_cast<Eigen::Index>(i), 0) = g.nodes[i];
  const Eigen::VectorXd K = s->kernel_diag(nodes);
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double w = g.weights[i] * K[static_cast<Eigen::Index>(i)] / static_cast<double>(s->size());
    m2 += w * std::pow(g.nodes[i], 2);
    m4 += w * std::pow(g.nodes[i], 4);
  }
  const Eigen::ArrayXd y = run.points.col(0).array();
  const double e2 = y.square().mean(), e4 = y.pow(4).mean();
  const double sd2 = std::sqrt((m4 - m2 * m2) / static_cast<double>(count));
  CHECK(std::abs(e2 - m2) < 5.0 * sd2);
}

TEST_CASE("nu sampler: uniform for exponentials, deterministic per seed") {
  auto s = exponential_space(Box::unit_cube(1), 3);
  const SampleRun a = sample_nu(s, 3000, 8);
  CHECK(ks_statistic(column(a.points, 0), [](double t) { return t; }) < ks_limit(3000));
  const SampleRun b = sample_nu(s, 3000, 8);
  CHECK(a.points == b.points);
  const SampleRun c = sample_nu(s, 3000, 9);
  CHECK(a.points != c.points);
}

TEST_CASE("nu sampler follows R(x)/int R for Chebyshev d=1") {
  auto s = tensor_chebyshev_space(Box::symmetric(1), 3);
  const std::size_t count = 6000;
  const SampleRun run = sample_nu(s, count, 21);
  // Oracle CDF by trapezoid integration of R on a fine grid.
  const int m = 20001;
  PointSet x(m, 1);
  for (int i = 0; i < m; ++i) x(i, 0) = -1.0 + 2.0 * i / (m - 1);
  const Eigen::VectorXd R = s->grad_norm_sq(x).cwiseSqrt();
  std::vector<double> cdf(m, 0.0);
  for (int i = 1; i < m; ++i) cdf[i] = cdf[i - 1] + 0.5 * (R[i] + R[i - 1]) * (2.0 / (m - 1));
  for (double& v : cdf) v /= cdf.back();
  auto F = [&](double y) {
    const double t = (y + 1.0) / 2.0 * (m - 1);
    const int i = std::clamp(static_cast<int>(t), 0, m - 2);
    return cdf[i] + (t - i) * (cdf[i + 1] - cdf[i]);
  };
  CHECK(ks_statistic(column(run.points, 0), F) < ks_limit(count));
}
