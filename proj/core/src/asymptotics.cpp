#include "rwam/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "rwam/covering.hpp"
#include "rwam/error.hpp"
#include "rwam/meshgen.hpp"
#include "rwam/parallel.hpp"
#include "rwam/rng.hpp"
#include "rwam/verify.hpp"

namespace rwam {

ExponentFit fit_exponent(const std::vector<int>& levels, const std::vector<double>& N,
                         const std::vector<double>& quantity, int tail_window, int min_levels) {
  require(levels.size() == N.size() && N.size() == quantity.size(), ErrorKind::shape,
          "fit inputs have different lengths");
  require(tail_window >= 3, ErrorKind::fit, "tail window must be >= 3");
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return N[a] < N[b]; });
  const std::size_t take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(tail_window));
  if (static_cast<int>(take) < min_levels)
    fail(ErrorKind::fit, "need at least " + std::to_string(min_levels) + " levels, got " +
                             std::to_string(levels.size()));
  ExponentFit fit;
  fit.tail_window = static_cast<int>(take);
  for (std::size_t k = order.size() - take; k < order.size(); ++k) {
    const std::size_t i = order[k];
    require(N[i] > 0.0 && quantity[i] > 0.0 && std::isfinite(quantity[i]), ErrorKind::fit,
            "fit data must be positive and finite (level " + std::to_string(levels[i]) + ")");
    fit.levels.push_back(levels[i]);
    fit.x.push_back(std::log(N[i]));
    fit.y.push_back(std::log(quantity[i]));
  }
  const double n = static_cast<double>(take);
  const double mx = std::accumulate(fit.x.begin(), fit.x.end(), 0.0) / n;
  const double my = std::accumulate(fit.y.begin(), fit.y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < take; ++k) {
    sxx += (fit.x[k] - mx) * (fit.x[k] - mx);
    sxy += (fit.x[k] - mx) * (fit.y[k] - my);
  }
  require(sxx > 0.0, ErrorKind::fit, "levels in the tail window share the same N");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < take; ++k) {
    const double e = fit.y[k] - (fit.intercept + fit.slope * fit.x[k]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

ExponentFit qstar_estimate(const SpaceSpec& spec, const std::vector<int>& levels, const GridSpec& grid,
                           int tail_window) {
  require(levels.size() >= 4, ErrorKind::fit, "q* estimate needs at least 4 levels");
  std::vector<double> N, K;
  for (int n : levels) {
    const SpacePtr space = make_space(spec, n);
    N.push_back(static_cast<double>(space->size()));
    K.push_back(kernel_profile(*space, grid).K_mu);
  }
  return fit_exponent(levels, N, K, tail_window, 4);
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), ErrorKind::precondition, "quantile of an empty sample");
  require(q >= 0.0 && q <= 1.0, ErrorKind::precondition, "quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double t = pos - static_cast<double>(lo);
  if (t == 0.0) return values[lo];
  return (1.0 - t) * values[lo] + t * values[hi];
}

WamFit wam_exponent_fit(const std::vector<SweepRow>& rows, const std::string& strategy, double q, int tail_window) {
  std::map<int, std::pair<std::size_t, std::vector<double>>> by_level;
  std::map<int, std::size_t> M;
  for (const auto& r : rows) {
    if (r.strategy != strategy || !r.error.empty()) continue;
    auto& slot = by_level[r.level];
    slot.first = r.N;
    M[r.level] = std::max(M[r.level], r.M);
    if (std::isfinite(r.C_hat) && r.C_hat > 0.0) slot.second.push_back(r.C_hat);
  }
  std::vector<int> levels, c_levels;
  std::vector<double> N, Ms, cN, C;
  for (const auto& [lvl, slot] : by_level) {
    levels.push_back(lvl);
    N.push_back(static_cast<double>(slot.first));
    Ms.push_back(static_cast<double>(M[lvl]));
    if (!slot.second.empty()) {
      c_levels.push_back(lvl);
      cN.push_back(static_cast<double>(slot.first));
      C.push_back(quantile(slot.second, q));
    }
  }
  if (levels.size() < 3) fail(ErrorKind::fit, "strategy '" + strategy + "' has fewer than 3 complete levels");
  WamFit out;
  out.a_fit = fit_exponent(levels, N, Ms, tail_window);
  out.b_fit = fit_exponent(c_levels, cN, C, tail_window);
  return out;
}

std::uint64_t cell_seed(std::uint64_t master, int level, Strategy strategy, int trial) noexcept {
  return stream_seed(master, {static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(strategy),
                              static_cast<std::uint64_t>(trial)});
}

Mesh build_strategy_mesh(const SpacePtr& space, const KernelProfile& profile, const StrategyConfig& sc,
                         const WeightedCovering* cover, double qstar, const std::string& qstar_source,
                         std::uint64_t seed) {
  switch (parse_strategy(sc.name)) {
    case Strategy::mu_wam:
      return build_mu_mesh(space, profile, qstar, seed, qstar_source);
    case Strategy::muv_wam:
      return build_muV_mesh(space, seed, MuVOptions{sc.count_rule, sc.delta, sc.r});
    case Strategy::uniform_am:
      if (sc.covering_size) return build_uniform_am_mesh(space, profile, sc.k, sc.r, *sc.covering_size, seed);
      require(cover != nullptr, ErrorKind::precondition, "uniform strategy needs a covering or covering_size");
      return build_uniform_am_mesh(space, profile, sc.k, sc.r, cover->size(), seed);
    case Strategy::nu_am:
      require(cover != nullptr, ErrorKind::precondition, "nu strategy needs a covering");
      return build_nu_am_mesh(space, profile, sc.k, sc.r, *cover, seed);
    case Strategy::manual:
      break;
  }
  fail(ErrorKind::config, "manual meshes cannot be generated");
}

namespace {

struct LevelContext {
  SpacePtr space;
  std::shared_ptr<const KernelProfile> profile;
  std::string error;
};

struct StrategyContext {
  std::shared_ptr<const WeightedCovering> cover;
  double qstar = 0.0;
  std::string qstar_source;
  std::string error;
};

std::string describe(const std::exception& e) { return e.what(); }

}  // namespace

SweepResult experiment_sweep(const SweepConfig& cfg) {
  SweepResult result;
  if (cfg.strategies.empty() || cfg.levels.empty() || cfg.trials <= 0) return result;
  const std::size_t L = cfg.levels.size(), S = cfg.strategies.size(), T = static_cast<std::size_t>(cfg.trials);

  std::vector<LevelContext> levels(L);
  parallel_for(L, cfg.jobs, [&](std::size_t l) {
    try {
      levels[l].space = make_space(cfg.space, cfg.levels[l]);
      levels[l].profile = std::make_shared<const KernelProfile>(kernel_profile(*levels[l].space, cfg.grid));
    } catch (const std::exception& e) {
      levels[l].error = describe(e);
    }
  });

  // Analytic or estimated q* per mu strategy.
  std::vector<StrategyContext> strat(L * S);
  for (std::size_t s = 0; s < S; ++s) {
    const auto& sc = cfg.strategies[s];
    const Strategy kind = parse_strategy(sc.name);
    std::string qerr;
    double q = 0.0;
    std::string qsrc;
    if (kind == Strategy::mu_wam) {
      if (sc.qstar) {
        q = *sc.qstar;
        qsrc = "analytic";
      } else {
        try {
          q = std::max(1.0, qstar_estimate(cfg.space, cfg.levels, cfg.grid).slope);
          qsrc = "estimated";
        } catch (const std::exception& e) {
          qerr = describe(e);
        }
      }
    }
    for (std::size_t l = 0; l < L; ++l) {
      auto& ctx = strat[l * S + s];
      ctx.qstar = q;
      ctx.qstar_source = qsrc;
      ctx.error = qerr;
    }
  }
  parallel_for(L * S, cfg.jobs, [&](std::size_t i) {
    const std::size_t l = i / S, s = i % S;
    const auto& sc = cfg.strategies[s];
    const Strategy kind = parse_strategy(sc.name);
    auto& ctx = strat[i];
    if (!levels[l].error.empty() || !ctx.error.empty()) return;
    const bool needs_cover = kind == Strategy::nu_am || (kind == Strategy::uniform_am && !sc.covering_size);
    if (!needs_cover) return;
    try {
      ctx.cover = std::make_shared<const WeightedCovering>(cover_space(*levels[l].space, sc.k, cfg.grid));
    } catch (const std::exception& e) {
      ctx.error = describe(e);
    }
  });

  result.rows.resize(L * S * T);
  parallel_for(L * S * T, cfg.jobs, [&](std::size_t i) {
    const std::size_t l = i / (S * T), s = (i / T) % S, t = i % T;
    const auto& sc = cfg.strategies[s];
    const Strategy kind = parse_strategy(sc.name);
    SweepRow& row = result.rows[i];
    row.level = cfg.levels[l];
    row.strategy = sc.name;
    row.trial = static_cast<int>(t);
    row.seed = cell_seed(cfg.seed, row.level, kind, row.trial);
    if (!levels[l].error.empty()) {
      row.error = levels[l].error;
      return;
    }
    const auto& ctx = strat[l * S + s];
    const SpacePtr& space = levels[l].space;
    const KernelProfile& prof = *levels[l].profile;
    row.N = space->size();
    if (!ctx.error.empty()) {
      row.error = ctx.error;
      return;
    }
    try {
      const Mesh mesh = build_strategy_mesh(space, prof, sc, ctx.cover.get(), ctx.qstar, ctx.qstar_source, row.seed);
      VerifyOptions vo;
      vo.delta = sc.delta;
      vo.k = sc.k;
      vo.compute_c_hat = cfg.compute_c_hat;
      vo.lp_grid = cfg.lp_grid;
      vo.seed = row.seed;
      const VerificationReport rep = verify_mesh(mesh, *space, prof, vo);
      row.M = mesh.M();
      row.gram_deviation = rep.gram_deviation;
      row.sigma_min = rep.sigma_min;
      row.C_hat = rep.C_hat;
      row.C_bound = rep.C_bound_l2;
      row.C_cheap = rep.C_cheap;
      row.hR = rep.hR;
      row.gram_pass = rep.gram_deviation <= sc.delta;
      const auto sw = rep.passes.find("sandwich");
      row.sandwich_pass = sw == rep.passes.end() || sw->second;
      row.pass = rep.all_pass();
    } catch (const std::exception& e) {
      row.error = describe(e);
    }
  });

  for (const auto& sc : cfg.strategies) {
    SweepResult::Fits f;
    f.strategy = sc.name;
    try {
      const WamFit w = wam_exponent_fit(result.rows, sc.name);
      f.a_fit = w.a_fit;
      f.b_fit = w.b_fit;
    } catch (const std::exception& e) {
      f.error = describe(e);
    }
    result.fits.push_back(std::move(f));
  }
  return result;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "level\tN\tstrategy\ttrial\tseed\tM\tgram_deviation\tsigma_min\tC_hat\tC_bound\tC_cheap\thR\tgram_pass\t"
        "sandwich_pass\tpass\terror\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    os << r.level << '\t' << r.N << '\t' << r.strategy << '\t' << r.trial << '\t' << r.seed << '\t' << r.M << '\t'
       << num(r.gram_deviation) << '\t' << num(r.sigma_min) << '\t' << num(r.C_hat) << '\t' << num(r.C_bound) << '\t'
       << num(r.C_cheap) << '\t' << num(r.hR) << '\t' << r.gram_pass << '\t' << r.sandwich_pass << '\t' << r.pass
       << '\t' << r.error << '\n';
  }
  return os.str();
}

}  // namespace rwam
