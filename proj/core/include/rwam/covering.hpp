#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rwam/fit.hpp"
#include "rwam/function_space.hpp"
#include "rwam/kernel.hpp"

namespace rwam {

/// Positive weight f tabulated on a candidate grid, with m_f = min f.
struct WeightTable {
  TensorGrid grid;
  Eigen::VectorXd f;
  double m_f = 0.0;
  double f_max = 0.0;
  int level = -1;     // hierarchy level of the space the weight came from
  std::size_t N = 0;  // dimension of that space (0 when synthetic)
  double R_mu = 0.0;  // grid max of R for space-derived tables
};

/// Table from arbitrary values on a grid.
WeightTable make_weight_table(TensorGrid grid, Eigen::VectorXd f);

/// f = 1/R on a grid with spacing <= min(eps/4, target_hr/R_mu). Throws a
/// resolution error when that grid would exceed `spec.max_points`.
WeightTable weight_table(const FunctionSpace& space, double eps, const GridSpec& spec = {});

/// Throws a resolution error when the grid spacing exceeds eps/4 on any axis.
void check_resolution(const WeightTable& table, double eps);

/// Solution of r = eps * F_r(y), where F_r(y) is the minimum of f/m_f over
/// grid points of the closed ball B_r(y). Between successive distance shells
/// F is interpolated linearly in r, which makes the fixed point unique.
struct LocalRadius {
  double r = 0.0;
  double residual = 0.0;  // |r - eps F_r(y)|
};

LocalRadius local_radius(std::span<const double> y, double eps, const WeightTable& table);

struct WeightedCovering {
  PointSet centers;
  std::vector<double> radii;
  std::vector<std::size_t> center_index;  // grid index of each center
  double epsilon = 0.0;
  double G = 1.0;
  double m_f = 0.0;
  double max_residual = 0.0;
  double slack = 0.0;  // grid covering radius: continuum coverage up to this
  double k = 0.0;      // eps = 1 / (k R_mu) for space-derived covers
  double R_mu = 0.0;
  int level = -1;
  std::size_t N = 0;

  std::size_t size() const noexcept { return radii.size(); }
};

/// Greedy set cover over grid-point centers: each step takes the candidate
/// covering the most uncovered grid points (ties: larger radius, then lower
/// index) until every grid point is covered.
WeightedCovering greedy_weighted_cover(const WeightTable& table, double eps);

/// G = max over centers of (max f / min f over the ball)^d.
double oscillation_G(const WeightTable& table, const WeightedCovering& cover);

/// True when the balls B_{r(y, eps)}(y) around `centers` cover every grid
/// point.
bool validate_weighted_cover(const WeightTable& table, const PointSet& centers, double eps);

/// Grid points within distance r of y.
std::vector<std::size_t> ball_points(const TensorGrid& grid, std::span<const double> y, double r);

struct PstarLevel {
  int level = 0;
  std::size_t N = 0;
  double R_max = 0.0;
  double R_min = 0.0;
  double integral = 0.0;  // int R^d dx
  std::size_t cover_size = 0;
  double G = 1.0;
  double epsilon = 0.0;
};

struct PstarBound {
  ExponentFit beta_fit;      // log(R_max / R_min) vs log N
  ExponentFit integral_fit;  // log int R^d vs log N
  double beta_hat = 0.0;
  double bound = 0.0;  // d beta_hat + integral slope
  std::vector<PstarLevel> table;
};

PstarBound pstar_upper_bound(const SpaceSpec& spec, const std::vector<int>& levels, const GridSpec& grid = {},
                             int tail_window = kDefaultTailWindow);

struct PstarEmpirical {
  ExponentFit fit;  // log(|cover| G) vs log N
  std::vector<PstarLevel> table;
};

/// Covers with f = 1/R_n and eps_n = 1 / (k R_mu(V_n)).
PstarEmpirical pstar_empirical(const SpaceSpec& spec, const std::vector<int>& levels, double k = 3.0,
                               const GridSpec& grid = {}, int tail_window = kDefaultTailWindow);

/// Cover of one space with eps = 1 / (k R_mu).
WeightedCovering cover_space(const FunctionSpace& space, double k, const GridSpec& grid = {});

}  // namespace rwam
