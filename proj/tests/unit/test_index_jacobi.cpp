#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rwam/error.hpp"
#include "rwam/index_set.hpp"
#include "rwam/jacobi.hpp"

using namespace rwam;

TEST_CASE("total degree set has binomial size and graded order") {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const IndexSet s = total_degree_set(n, d);
      CHECK(s.size() == binomial(n + d, d));
      CHECK(s.max_degree() == n);
      for (std::size_t i = 1; i < s.size(); ++i) CHECK(graded_lex_less(s[i - 1], s[i]));
    }
  }
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
}

TEST_CASE("index set rejects malformed input") {
  CHECK_THROWS_AS(IndexSet({{0, 1}, {0, 1}}, 1), Error);
  CHECK_THROWS_AS(IndexSet({{0, -1}}, 1), Error);
  CHECK_THROWS_AS(IndexSet({{0, 1}, {2}}, 1), Error);
  const IndexSet s({{2, 0}, {0, 0}, {0, 1}}, 2);
  CHECK(s[0] == MultiIndex{0, 0});
  CHECK(s[1] == MultiIndex{0, 1});
  CHECK(s.max_axis_degree() == 2);
}

TEST_CASE("Chebyshev recurrence matches sqrt(2) cos(k acos y)") {
  const JacobiRecurrence rec(-0.5, -0.5, 10);
  std::vector<double> p(11), dp(11);
  for (double y : {-0.97, -0.3, 0.0, 0.41, 0.88}) {
    rec.eval(y, p, dp);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k <= 10; ++k) {
      CHECK(p[k] == doctest::Approx(std::sqrt(2.0) * std::cos(k * std::acos(y))).epsilon(1e-12));
      const double dt = std::sqrt(2.0) * k * std::sin(k * std::acos(y)) / std::sqrt(1.0 - y * y);
      CHECK(dp[k] == doctest::Approx(dt).epsilon(1e-10));
    }
  }
}

TEST_CASE("Legendre recurrence matches sqrt(2k+1) P_k") {
  const JacobiRecurrence rec(0.0, 0.0, 12);
  std::vector<double> p(13);
  for (double y : {-1.0, -0.5, 0.2, 0.77, 1.0}) {
    rec.eval(y, p);
    for (int k = 0; k <= 12; ++k)
      CHECK(p[k] == doctest::Approx(std::sqrt(2.0 * k + 1.0) * std::legendre(k, y)).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Jacobi rules are orthonormality-exact") {
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {-0.5, -0.5}, {1.5, 0.25}, {-0.3, 2.0}}) {
    const int nodes = 9, deg = 8;
    const GaussRule g = gauss_jacobi(a, b, nodes);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
    const JacobiRecurrence rec(a, b, deg);
    std::vector<double> p(deg + 1);
    std::vector<std::vector<double>> gram(deg + 1, std::vector<double>(deg + 1, 0.0));
    for (int m = 0; m < nodes; ++m) {
      rec.eval(g.nodes[m], p);
      for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j) gram[i][j] += g.weights[m] * p[i] * p[j];
    }
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; j <= deg; ++j) CHECK(std::abs(gram[i][j] - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("uniform Gauss rule integrates y^2 to 1/3") {
  const GaussRule g = gauss_jacobi(0.0, 0.0, 4);
  double m2 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) m2 += g.weights[i] * g.nodes[i] * g.nodes[i];
  CHECK(m2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Jacobi CDF and quantile") {
  for (double y : {-0.9, -0.2, 0.5, 0.95}) {
    CHECK(jacobi_cdf(-0.5, -0.5, y) == doctest::Approx(1.0 - std::acos(y) / std::numbers::pi).epsilon(1e-12));
    CHECK(jacobi_cdf(0.0, 0.0, y) == doctest::Approx((y + 1.0) / 2.0).epsilon(1e-12));
  }
  for (double u : {0.01, 0.3, 0.5, 0.9}) {
    const double y = jacobi_quantile(1.2, 0.4, u);
    CHECK(jacobi_cdf(1.2, 0.4, y) == doctest::Approx(u).epsilon(1e-10));
  }
  const TabulatedJacobiQuantile q(-0.5, -0.5);
  for (double u : {0.05, 0.5, 0.77}) CHECK(std::abs(q(u) - jacobi_quantile(-0.5, -0.5, u)) < 1e-4);
}
