#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwam/covering.hpp"
#include "rwam/fit.hpp"
#include "rwam/function_space.hpp"
#include "rwam/kernel.hpp"
#include "rwam/meshgen.hpp"

namespace rwam {

/// Slope of log K_mu(V_n) vs log N_n; needs at least four levels.
ExponentFit qstar_estimate(const SpaceSpec& spec, const std::vector<int>& levels, const GridSpec& grid = {},
                           int tail_window = kDefaultTailWindow);

/// One (level, strategy, trial) cell of a sweep.
struct SweepRow {
  int level = 0;
  std::size_t N = 0;
  std::string strategy;
  int trial = 0;
  std::uint64_t seed = 0;
  std::size_t M = 0;
  double gram_deviation = 0.0;
  double sigma_min = 0.0;
  double C_hat = 0.0;
  double C_bound = 0.0;
  double C_cheap = 0.0;
  double hR = 0.0;
  bool gram_pass = false;
  bool sandwich_pass = false;
  bool pass = false;
  std::string error;  // empty when the cell succeeded
};

struct StrategyConfig {
  std::string name = "muv";  // mu | muv | uniform | nu
  double delta = 0.5;
  double r = 1.0;
  double k = 3.0;
  /// Analytic q* for the mu strategy; estimated from the levels when empty.
  std::optional<double> qstar;
  /// muv only: "theorem" uses 25 N ln N, "wls" the weighted least-squares
  /// count with kappa = N.
  std::string count_rule = "theorem";
  /// uniform only: covering size; defaults to the weighted cover of the
  /// level when empty.
  std::optional<std::size_t> covering_size;
};

struct SweepConfig {
  SpaceSpec space;
  std::vector<int> levels;
  std::vector<StrategyConfig> strategies;
  int trials = 1;
  std::uint64_t seed = 0;
  GridSpec grid;                                           // kernel profile grid
  GridSpec lp_grid{0.05, std::size_t{1} << 14, 65, {}};  // C_hat evaluation grid
  bool compute_c_hat = true;
  int jobs = 1;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Per strategy: fitted exponents of M and of the C_hat quantile.
  struct Fits {
    std::string strategy;
    std::optional<ExponentFit> a_fit;
    std::optional<ExponentFit> b_fit;
    std::string error;
  };
  std::vector<Fits> fits;
};

/// Seed of one (level, strategy, trial) cell. Keyed by strategy kind, so
/// reordering the strategy list leaves every cell's stream unchanged.
std::uint64_t cell_seed(std::uint64_t master, int level, Strategy strategy, int trial) noexcept;

/// Builds one mesh for `strategy`. `cover` is required for nu and for
/// uniform without an explicit covering size.
Mesh build_strategy_mesh(const SpacePtr& space, const KernelProfile& profile, const StrategyConfig& strategy,
                         const WeightedCovering* cover, double qstar, const std::string& qstar_source,
                         std::uint64_t seed);

/// Per-level M and C_hat quantile fits for one strategy's rows.
struct WamFit {
  ExponentFit a_fit;
  ExponentFit b_fit;
};
WamFit wam_exponent_fit(const std::vector<SweepRow>& rows, const std::string& strategy, double quantile = 0.9,
                        int tail_window = kDefaultTailWindow);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Builds and verifies every (level, strategy, trial) cell. Cell errors are
/// recorded in the row and the sweep continues.
SweepResult experiment_sweep(const SweepConfig& config);

/// Delimited text rendering of the rows, one per line, fixed column order.
std::string sweep_table(const std::vector<SweepRow>& rows);

}  // namespace rwam
