#include "rwam/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "rwam/error.hpp"

namespace rwam {

WeightTable make_weight_table(TensorGrid grid, Eigen::VectorXd f) {
  require(static_cast<std::size_t>(f.size()) == grid.size(), ErrorKind::shape, "weight table size differs from grid");
  require(f.size() > 0 && f.minCoeff() > 0.0 && std::isfinite(f.maxCoeff()), ErrorKind::precondition,
          "weight must be finite and strictly positive on the grid");
  WeightTable t;
  t.m_f = f.minCoeff();
  t.f_max = f.maxCoeff();
  t.grid = std::move(grid);
  t.f = std::move(f);
  return t;
}

WeightTable weight_table(const FunctionSpace& space, double eps, const GridSpec& spec) {
  require(eps > 0.0, ErrorKind::precondition, "epsilon must be positive");
  GridSpec coarse = spec;
  coarse.points_per_axis.clear();
  coarse.max_points = std::min<std::size_t>(spec.max_points, std::size_t{1} << 16);
  const KernelProfile p0 = kernel_profile(space, coarse);
  double step = eps / 4.0;
  if (p0.R_mu > 0.0) step = std::min(step, spec.target_hr / p0.R_mu);
  const Box& box = space.domain();
  std::vector<int> n(box.dim());
  double total = 1.0;
  for (int j = 0; j < box.dim(); ++j) {
    const double c = std::ceil(box.width(j) / step) + 1.0;
    total *= c;
    n[j] = static_cast<int>(std::min(c, 1e9));
  }
  if (total > static_cast<double>(spec.max_points))
    fail(ErrorKind::resolution, "candidate grid for eps = " + std::to_string(eps) + " needs " +
                                    std::to_string(total) + " points, above the cap of " +
                                    std::to_string(spec.max_points));
  const KernelProfile prof = kernel_profile_on(space, TensorGrid(box, n));
  require(prof.R_min > 0.0, ErrorKind::precondition, "R(x) vanishes on the candidate grid; f = 1/R is undefined");
  WeightTable t = make_weight_table(prof.grid, prof.grad_norm.cwiseInverse());
  t.level = space.level();
  t.N = space.size();
  t.R_mu = prof.R_mu;
  return t;
}

void check_resolution(const WeightTable& table, double eps) {
  for (int j = 0; j < table.grid.dim(); ++j)
    if (table.grid.spacing(j) > eps / 4.0 * (1.0 + 1e-12))
      fail(ErrorKind::resolution, "grid spacing " + std::to_string(table.grid.spacing(j)) + " on axis " +
                                      std::to_string(j) + " exceeds eps/4 = " + std::to_string(eps / 4.0));
}

std::vector<std::size_t> ball_points(const TensorGrid& grid, std::span<const double> y, double r) {
  const int d = grid.dim();
  std::vector<int> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    const auto& ax = grid.axis(j);
    const double h = grid.spacing(j);
    const int n = static_cast<int>(ax.size());
    lo[j] = std::clamp(static_cast<int>(std::floor((y[j] - r - ax[0]) / h)), 0, n - 1);
    hi[j] = std::clamp(static_cast<int>(std::ceil((y[j] + r - ax[0]) / h)), 0, n - 1);
  }
  const double r2 = r * r * (1.0 + 1e-12);
  std::vector<std::size_t> out;
  std::vector<int> idx(lo);
  for (;;) {
    double s = 0.0;
    std::size_t flat = 0;
    for (int j = 0; j < d; ++j) {
      const double dx = grid.axis(j)[idx[j]] - y[j];
      s += dx * dx;
      flat = flat * grid.axis(j).size() + static_cast<std::size_t>(idx[j]);
    }
    if (s <= r2) out.push_back(flat);
    int j = d - 1;
    while (j >= 0 && idx[j] == hi[j]) {
      idx[j] = lo[j];
      --j;
    }
    if (j < 0) break;
    ++idx[j];
  }
  return out;
}

namespace {

double distance(const TensorGrid& grid, std::size_t g, std::span<const double> y, std::vector<double>& x) {
  grid.point(g, x);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
  return std::sqrt(s);
}

}  // namespace

LocalRadius local_radius(std::span<const double> y, double eps, const WeightTable& table) {
  require(eps > 0.0, ErrorKind::precondition, "epsilon must be positive");
  const TensorGrid& grid = table.grid;
  std::vector<double> x(grid.dim());
  double w = 2.0 * eps;
  for (;;) {
    const auto pts = ball_points(grid, y, w);
    // Shells: distinct distances with the prefix minimum of f / m_f.
    std::vector<std::pair<double, double>> dv;
    dv.reserve(pts.size());
    for (std::size_t g : pts) dv.emplace_back(distance(grid, g, y, x), table.f[static_cast<Eigen::Index>(g)] / table.m_f);
    std::sort(dv.begin(), dv.end());
    std::vector<double> d, P;
    for (const auto& [dist, v] : dv) {
      if (!d.empty() && dist - d.back() <= 1e-13 * w) {
        P.back() = std::min(P.back(), v);
      } else {
        d.push_back(dist);
        P.push_back(P.empty() ? v : std::min(P.back(), v));
      }
    }
    const bool complete = pts.size() == grid.size();
    if (d.empty()) {
      w *= 2.0;
      continue;
    }
    auto F = [&](double r) {
      if (r <= d.front()) return P.front();
      if (r >= d.back()) return P.back();
      const std::size_t k = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), r) - d.begin());
      const double t = (r - d[k - 1]) / (d[k] - d[k - 1]);
      return P[k - 1] + t * (P[k] - P[k - 1]);
    };
    // g(r) = r - eps F(r) is increasing; bisect over the breakpoints.
    auto g_at = [&](std::size_t k) { return d[k] - eps * P[k]; };
    double r;
    if (g_at(0) >= 0.0) {
      r = eps * P.front();
    } else if (g_at(d.size() - 1) < 0.0) {
      if (!complete) {
        w *= 2.0;
        continue;
      }
      r = eps * P.back();
    } else {
      std::size_t lo = 0, hi = d.size() - 1;  // g(lo) < 0 <= g(hi)
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (g_at(mid) < 0.0 ? lo : hi) = mid;
      }
      const double s = (P[hi] - P[lo]) / (d[hi] - d[lo]);
      r = eps * (P[lo] - s * d[lo]) / (1.0 - eps * s);
      r = std::clamp(r, d[lo], d[hi]);
    }
    return {r, std::abs(r - eps * F(r))};
  }
}

WeightedCovering greedy_weighted_cover(const WeightTable& table, double eps) {
  check_resolution(table, eps);
  const TensorGrid& grid = table.grid;
  const std::size_t n = grid.size();
  const int d = grid.dim();
  std::vector<double> radius(n), residual(n), x(d);
  std::vector<std::vector<std::size_t>> balls(n);
  for (std::size_t g = 0; g < n; ++g) {
    grid.point(g, x);
    const LocalRadius lr = local_radius(x, eps, table);
    radius[g] = lr.r;
    residual[g] = lr.residual;
    balls[g] = ball_points(grid, x, lr.r);
  }
  using Key = std::tuple<std::size_t, double, std::int64_t>;  // gain, radius, -index
  std::priority_queue<Key> heap;
  for (std::size_t g = 0; g < n; ++g) heap.emplace(balls[g].size(), radius[g], -static_cast<std::int64_t>(g));
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  WeightedCovering cov;
  cov.epsilon = eps;
  cov.m_f = table.m_f;
  cov.level = table.level;
  cov.N = table.N;
  cov.R_mu = table.R_mu;
  cov.slack = grid.covering_radius();
  while (remaining > 0 && !heap.empty()) {
    auto [gain, r, neg] = heap.top();
    heap.pop();
    const std::size_t g = static_cast<std::size_t>(-neg);
    std::size_t fresh = 0;
    for (std::size_t p : balls[g]) fresh += covered[p] ? 0 : 1;
    if (fresh == 0) continue;
    if (fresh < gain) {
      heap.emplace(fresh, r, neg);
      continue;
    }
    for (std::size_t p : balls[g]) {
      if (!covered[p]) {
        covered[p] = 1;
        --remaining;
      }
    }
    cov.center_index.push_back(g);
    cov.radii.push_back(radius[g]);
    cov.max_residual = std::max(cov.max_residual, residual[g]);
  }
  require(remaining == 0, ErrorKind::numerical, "greedy cover terminated with uncovered grid points");
  cov.centers.resize(static_cast<Eigen::Index>(cov.size()), d);
  for (std::size_t c = 0; c < cov.size(); ++c) {
    grid.point(cov.center_index[c], x);
    for (int j = 0; j < d; ++j) cov.centers(static_cast<Eigen::Index>(c), j) = x[j];
  }
  cov.G = oscillation_G(table, cov);
  return cov;
}

double oscillation_G(const WeightTable& table, const WeightedCovering& cover) {
  const int d = table.grid.dim();
  std::vector<double> y(d);
  double G = 1.0;
  for (std::size_t c = 0; c < cover.size(); ++c) {
    for (int j = 0; j < d; ++j) y[j] = cover.centers(static_cast<Eigen::Index>(c), j);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t g : ball_points(table.grid, y, cover.radii[c])) {
      lo = std::min(lo, table.f[static_cast<Eigen::Index>(g)]);
      hi = std::max(hi, table.f[static_cast<Eigen::Index>(g)]);
    }
    if (hi > 0.0) G = std::max(G, std::pow(hi / lo, d));
  }
  return G;
}

bool validate_weighted_cover(const WeightTable& table, const PointSet& centers, double eps) {
  const int d = table.grid.dim();
  require(centers.cols() == d, ErrorKind::shape, "center dimension differs from grid");
  std::vector<char> covered(table.grid.size(), 0);
  std::vector<double> y(d);
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    for (int j = 0; j < d; ++j) y[j] = centers(c, j);
    const double r = local_radius(y, eps, table).r;
    for (std::size_t g : ball_points(table.grid, y, r)) covered[g] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

WeightedCovering cover_space(const FunctionSpace& space, double k, const GridSpec& grid) {
  require(k > 0.0, ErrorKind::precondition, "k must be positive");
  const KernelProfile prof = kernel_profile(space, grid);
  require(prof.R_mu > 0.0, ErrorKind::precondition, "R_mu vanishes; the space has no nonconstant element");
  const double eps = 1.0 / (k * prof.R_mu);
  WeightTable table = weight_table(space, eps, grid);
  table.R_mu = prof.R_mu;
  WeightedCovering cov = greedy_weighted_cover(table, eps);
  cov.k = k;
  return cov;
}

namespace {

// Trapezoid integral of values over a tensor grid.
double trapezoid(const TensorGrid& grid, const Eigen::VectorXd& values) {
  std::vector<int> idx;
  double s = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    grid.unflatten(g, idx);
    double w = 1.0;
    for (int j = 0; j < grid.dim(); ++j) {
      const bool end = idx[j] == 0 || idx[j] == grid.points_on_axis(j) - 1;
      w *= grid.spacing(j) * (end ? 0.5 : 1.0);
    }
    s += w * values[static_cast<Eigen::Index>(g)];
  }
  return s;
}

}  // namespace

PstarBound pstar_upper_bound(const SpaceSpec& spec, const std::vector<int>& levels, const GridSpec& grid,
                             int tail_window) {
  require(levels.size() >= 3, ErrorKind::fit, "p* bound needs at least 3 levels");
  PstarBound out;
  std::vector<double> N, ratio, integral;
  for (int n : levels) {
    const SpacePtr space = make_space(spec, n);
    const KernelProfile prof = kernel_profile(*space, grid);
    require(prof.R_min > 0.0, ErrorKind::precondition, "R(x) vanishes at level " + std::to_string(n));
    PstarLevel row;
    row.level = n;
    row.N = space->size();
    row.R_max = prof.grad_norm.maxCoeff();
    row.R_min = prof.R_min;
    row.integral = trapezoid(prof.grid, prof.grad_norm.array().pow(space->dim()).matrix());
    out.table.push_back(row);
    N.push_back(static_cast<double>(row.N));
    ratio.push_back(row.R_max / row.R_min);
    integral.push_back(row.integral);
  }
  // A ratio of exactly one has zero slope; log(1) = 0 is fine for the fit.
  out.beta_fit = fit_exponent(levels, N, ratio, tail_window);
  out.integral_fit = fit_exponent(levels, N, integral, tail_window);
  out.beta_hat = out.beta_fit.slope;
  out.bound = spec.dim * out.beta_hat + out.integral_fit.slope;
  return out;
}

PstarEmpirical pstar_empirical(const SpaceSpec& spec, const std::vector<int>& levels, double k,
                               const GridSpec& grid, int tail_window) {
  require(levels.size() >= 3, ErrorKind::fit, "p* estimate needs at least 3 levels");
  PstarEmpirical out;
  std::vector<double> N, q;
  for (int n : levels) {
    const SpacePtr space = make_space(spec, n);
    const WeightedCovering cov = cover_space(*space, k, grid);
    PstarLevel row;
    row.level = n;
    row.N = space->size();
    row.R_max = cov.R_mu;
    row.cover_size = cov.size();
    row.G = cov.G;
    row.epsilon = cov.epsilon;
    out.table.push_back(row);
    N.push_back(static_cast<double>(row.N));
    q.push_back(static_cast<double>(row.cover_size) * row.G);
  }
  out.fit = fit_exponent(levels, N, q, tail_window);
  return out;
}

}  // namespace rwam
