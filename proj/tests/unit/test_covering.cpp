#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rwam/covering.hpp"
#include "rwam/error.hpp"
#include "rwam/function_space.hpp"

using namespace rwam;

namespace {

WeightTable linear_table(int per_axis) {
  TensorGrid grid(Box::unit_cube(2), {per_axis, per_axis});
  Eigen::VectorXd f(static_cast<Eigen::Index>(grid.size()));
  std::vector<double> x(2);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    grid.point(g, x);
    f[static_cast<Eigen::Index>(g)] = 1.0 + 2.0 * x[0] + x[1] * x[1];
  }
  return make_weight_table(std::move(grid), std::move(f));
}

double dist(const TensorGrid& grid, std::size_t g, std::span<const double> y) {
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  grid.point(g, x);
  double s = 0.0;
  for (int j = 0; j < grid.dim(); ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("ball_points equals brute-force distance filtering") {
  const TensorGrid grid(Box({0.0, -1.0}, {2.0, 1.0}), {21, 17});
  for (auto y : std::vector<std::vector<double>>{{0.3, 0.1}, {0.0, -1.0}, {1.97, 0.5}}) {
    for (double r : {0.05, 0.31, 1.2}) {
      auto got = ball_points(grid, y, r);
      std::sort(got.begin(), got.end());
      std::vector<std::size_t> want;
      for (std::size_t g = 0; g < grid.size(); ++g)
        if (dist(grid, g, y) <= r) want.push_back(g);
      CHECK(got == want);
    }
  }
}

TEST_CASE("local radius is a fixed point, at least eps, at most eps f(y)/m_f") {
  const WeightTable t = linear_table(81);
  CHECK(t.m_f == doctest::Approx(1.0));
  const double eps = 0.05;
  std::vector<double> y(2);
  for (std::size_t g : {std::size_t{0}, std::size_t{100}, std::size_t{3000}, t.grid.size() - 1}) {
    t.grid.point(g, y);
    const LocalRadius lr = local_radius(y, eps, t);
    CHECK(lr.residual <= 1e-9);
    CHECK(lr.r >= eps - 1e-12);
    CHECK(lr.r <= eps * t.f[static_cast<Eigen::Index>(g)] / t.m_f + 1e-12);
    // Every grid point in the ball has weight at least r / eps.
    double fmin = 1e300;
    for (std::size_t q : ball_points(t.grid, y, lr.r)) fmin = std::min(fmin, t.f[static_cast<Eigen::Index>(q)] / t.m_f);
    CHECK(eps * fmin >= lr.r - 1e-9);
  }
}

TEST_CASE("constant weights give r = eps") {
  TensorGrid grid(Box::unit_cube(2), {41, 41});
  const WeightTable t = make_weight_table(grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), 3.0));
  const std::vector<double> y{0.5, 0.5};
  const LocalRadius lr = local_radius(y, 0.1, t);
  CHECK(lr.r == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("greedy cover covers every grid point and respects the counting bound") {
  const WeightTable t = linear_table(81);
  const double eps = 0.05;
  const WeightedCovering cov = greedy_weighted_cover(t, eps);
  CHECK(cov.size() == cov.radii.size());
  CHECK(cov.max_residual <= 1e-9);
  CHECK(validate_weighted_cover(t, cov.centers, eps));
  std::vector<char> covered(t.grid.size(), 0);
  std::size_t largest_ball = 0;
  for (std::size_t c = 0; c < cov.size(); ++c) {
    const auto pts = ball_points(t.grid, std::vector<double>{cov.centers(static_cast<Eigen::Index>(c), 0), cov.centers(static_cast<Eigen::Index>(c), 1)}, cov.radii[c]);
    largest_ball = std::max(largest_ball, pts.size());
    for (std::size_t g : pts) covered[g] = 1;
    CHECK(cov.radii[c] >= eps - 1e-12);
  }
  CHECK(std::all_of(covered.begin(), covered.end(), [](char v) { return v == 1; }));
  CHECK(cov.size() * largest_ball >= t.grid.size());
  CHECK(oscillation_G(t, cov) >= 1.0);
  // The last greedy center covered points no earlier center reached.
  PointSet fewer = cov.centers.topRows(cov.centers.rows() - 1);
  CHECK_FALSE(validate_weighted_cover(t, fewer, eps));
}

TEST_CASE("covering resolution is enforced") {
  const WeightTable t = linear_table(11);
  CHECK_THROWS_AS(greedy_weighted_cover(t, 0.05), Error);
  CHECK_NOTHROW(check_resolution(t, 0.4));
}

TEST_CASE("space-derived covers grow with the level") {
  SpaceSpec spec;
  spec.family = "exponential";
  const auto c2 = cover_space(*make_space(spec, 2), 3.0);
  const auto c4 = cover_space(*make_space(spec, 4), 3.0);
  CHECK(c2.size() < c4.size());
  CHECK(c2.epsilon == doctest::Approx(1.0 / (3.0 * c2.R_mu)));
  CHECK(c2.G == doctest::Approx(1.0));
}
