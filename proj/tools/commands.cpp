#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "rwam/asymptotics.hpp"
#include "rwam/covering.hpp"
#include "rwam/error.hpp"
#include "rwam/meshgen.hpp"
#include "rwam/parallel.hpp"
#include "rwam/verify.hpp"

namespace rwam::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fit_json(const ExponentFit& f) {
  return {{"levels", f.levels}, {"slope", f.slope},         {"intercept", f.intercept},
          {"residual", f.residual}, {"tail_window", f.tail_window}};
}

fs::path out_dir(const ExperimentConfig& cfg) { return cfg.output_dir; }

/// Writes the resolved config next to the outputs and returns its hash.
std::string write_resolved(const ExperimentConfig& cfg) {
  ensure_directory(out_dir(cfg));
  write_atomic(out_dir(cfg) / "config.json", to_json(cfg).dump(2) + "\n");
  return config_hash(cfg);
}

double cover_k(const ExperimentConfig& cfg) {
  for (const auto& s : cfg.sweep.strategies)
    if (s.name == "nu") return s.k;
  return 3.0;
}

/// Per-level shared state for mesh generation.
struct Level {
  SpacePtr space;
  std::shared_ptr<const KernelProfile> profile;
  std::map<std::string, std::shared_ptr<const WeightedCovering>> covers;  // by strategy name
};

std::vector<Level> prepare_levels(const ExperimentConfig& cfg, bool with_covers) {
  const SweepConfig& sw = cfg.sweep;
  std::vector<Level> levels(sw.levels.size());
  parallel_for(levels.size(), sw.jobs, [&](std::size_t l) {
    levels[l].space = make_space(sw.space, sw.levels[l]);
    levels[l].profile = std::make_shared<const KernelProfile>(kernel_profile(*levels[l].space, sw.grid));
    if (!with_covers) return;
    for (const auto& s : sw.strategies) {
      const Strategy kind = parse_strategy(s.name);
      if (kind == Strategy::nu_am || (kind == Strategy::uniform_am && !s.covering_size))
        levels[l].covers[s.name] = std::make_shared<const WeightedCovering>(cover_space(*levels[l].space, s.k, sw.grid));
    }
  });
  return levels;
}

std::string mesh_name(const std::string& strategy, int level, int trial) {
  return strategy + "_n" + std::to_string(level) + "_t" + std::to_string(trial) + ".mesh";
}

const StrategyConfig* find_strategy(const ExperimentConfig& cfg, const std::string& name) {
  for (const auto& s : cfg.sweep.strategies)
    if (s.name == name) return &s;
  return nullptr;
}

json report_json(const VerificationReport& r, const std::string& hash, const std::string& mesh_file) {
  json passes = json::object();
  for (const auto& [k, v] : r.passes) passes[k] = v;
  return {{"config_hash", hash},
          {"mesh", mesh_file},
          {"strategy", r.strategy},
          {"level", r.level},
          {"N", r.N},
          {"M", r.M},
          {"weighted", r.weighted},
          {"gram_deviation", r.gram_deviation},
          {"delta_target", r.delta_target},
          {"sigma_min", r.sigma_min},
          {"C_hat", finite_or_null(r.C_hat)},
          {"C_cheap", finite_or_null(r.C_cheap)},
          {"C_bound_l2", r.C_bound_l2},
          {"polygon_factor", r.polygon_factor},
          {"hR", r.hR},
          {"passes", passes},
          {"all_pass", r.all_pass()}};
}

}  // namespace

ExperimentConfig resolve(const RunOptions& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path);
  if (o.seed) cfg.sweep.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.k) {
    if (!(*o.k > 2.0)) fail(ErrorKind::config, "--k must be > 2");
    for (auto& s : cfg.sweep.strategies) s.k = *o.k;
  }
  if (!o.strategies.empty()) {
    std::vector<StrategyConfig> kept;
    for (const auto& want : o.strategies) {
      const Strategy kind = parse_strategy(want);
      if (kind == Strategy::manual) fail(ErrorKind::config, "manual is not a generating strategy");
      const std::string name = short_name(kind);
      const StrategyConfig* s = find_strategy(cfg, name);
      StrategyConfig sc = s ? *s : strategy_defaults(kind);
      if (!s && o.k) sc.k = *o.k;
      if (std::none_of(kept.begin(), kept.end(), [&](const auto& x) { return x.name == name; })) kept.push_back(sc);
    }
    cfg.sweep.strategies = kept;
  }
  if (o.jobs < 1) fail(ErrorKind::config, "--jobs must be >= 1");
  cfg.sweep.jobs = o.jobs;
  return cfg;
}

int cmd_space_info(const RunOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const std::string hash = write_resolved(cfg);
  const auto levels = prepare_levels(cfg, false);
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "level\tN\tK_mu\tR_mu\tR_min\tlambda_min\tlambda_max\tK_exact\tR_exact\thR\tgrid_points\n";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const KernelProfile& p = *levels[l].profile;
    os << cfg.sweep.levels[l] << '\t' << p.N << '\t' << num(p.K_mu) << '\t' << num(p.R_mu) << '\t' << num(p.R_min)
       << '\t' << num(p.lambda_min()) << '\t' << num(p.lambda_max()) << '\t' << p.K_exact << '\t' << p.R_exact << '\t'
       << num(p.hR) << '\t' << p.grid.size() << '\n';
  }
  write_atomic(out_dir(cfg) / "space_info.tsv", os.str());
  std::cout << os.str();
  return kPass;
}

int cmd_build(const RunOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const SweepConfig& sw = cfg.sweep;
  require(!sw.strategies.empty(), ErrorKind::config, "no strategies configured (use strategies: or --strategy)");
  const std::string hash = write_resolved(cfg);
  const auto levels = prepare_levels(cfg, true);

  std::map<std::string, std::pair<double, std::string>> qstar;
  for (const auto& s : sw.strategies) {
    if (parse_strategy(s.name) != Strategy::mu_wam) continue;
    qstar[s.name] = s.qstar ? std::pair{*s.qstar, std::string("analytic")}
                            : std::pair{std::max(1.0, qstar_estimate(sw.space, sw.levels, sw.grid).slope),
                                        std::string("estimated")};
  }

  const std::size_t L = levels.size(), S = sw.strategies.size(), T = static_cast<std::size_t>(sw.trials);
  std::vector<Mesh> meshes(L * S * T);
  parallel_for(meshes.size(), sw.jobs, [&](std::size_t i) {
    const std::size_t l = i / (S * T), s = (i / T) % S, t = i % T;
    const StrategyConfig& sc = sw.strategies[s];
    const auto cover = levels[l].covers.find(sc.name);
    const auto q = qstar.find(sc.name);
    meshes[i] = build_strategy_mesh(levels[l].space, *levels[l].profile, sc,
                                     cover == levels[l].covers.end() ? nullptr : cover->second.get(),
                                     q == qstar.end() ? 0.0 : q->second.first,
                                     q == qstar.end() ? std::string() : q->second.second,
                                     cell_seed(sw.seed, sw.levels[l], parse_strategy(sc.name), static_cast<int>(t)));
  });

  std::ostringstream index;
  index << "# config_hash=" << hash << "\nfile\tstrategy\tlevel\ttrial\tN\tM\tseed\tproposals\taccepts\n";
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const std::size_t l = i / (S * T), s = (i / T) % S, t = i % T;
    const std::string name = mesh_name(sw.strategies[s].name, sw.levels[l], static_cast<int>(t));
    write_atomic(out_dir(cfg) / "meshes" / name, format_mesh(meshes[i], hash));
    index << name << '\t' << sw.strategies[s].name << '\t' << sw.levels[l] << '\t' << t << '\t' << meshes[i].N << '\t'
          << meshes[i].M() << '\t' << meshes[i].seed << '\t' << meshes[i].diagnostics.proposals << '\t'
          << meshes[i].diagnostics.accepts << '\n';
  }
  write_atomic(out_dir(cfg) / "meshes.tsv", index.str());
  std::cout << "built " << meshes.size() << " meshes in " << (out_dir(cfg) / "meshes").string() << "\n";
  return kPass;
}

int cmd_verify(const RunOptions& o, const std::vector<std::string>& mesh_paths) {
  const ExperimentConfig cfg = resolve(o);
  const std::string hash = write_resolved(cfg);
  std::vector<fs::path> paths(mesh_paths.begin(), mesh_paths.end());
  if (paths.empty()) {
    const fs::path dir = out_dir(cfg) / "meshes";
    if (fs::is_directory(dir))
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".mesh") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    require(!paths.empty(), ErrorKind::io, "no meshes found in '" + dir.string() + "' (run build first)");
  }

  struct Job {
    ParsedMesh parsed;
    VerificationReport report;
  };
  std::vector<Job> jobs(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    jobs[i].parsed = parse_mesh(read_file(paths[i]));
    if (jobs[i].parsed.config_hash != hash)
      fail(ErrorKind::consistency, "mesh '" + paths[i].string() + "' was built from config " +
                                       jobs[i].parsed.config_hash + ", not " + hash);
  }
  std::map<int, std::pair<SpacePtr, std::shared_ptr<const KernelProfile>>> spaces;
  for (const auto& j : jobs) spaces[j.parsed.mesh.level];
  std::vector<int> keys;
  for (const auto& [lvl, _] : spaces) keys.push_back(lvl);
  std::vector<std::pair<SpacePtr, std::shared_ptr<const KernelProfile>>> built(keys.size());
  parallel_for(keys.size(), cfg.sweep.jobs, [&](std::size_t i) {
    built[i].first = make_space(cfg.sweep.space, keys[i]);
    built[i].second = std::make_shared<const KernelProfile>(kernel_profile(*built[i].first, cfg.sweep.grid));
  });
  for (std::size_t i = 0; i < keys.size(); ++i) spaces[keys[i]] = built[i];

  parallel_for(jobs.size(), cfg.sweep.jobs, [&](std::size_t i) {
    const Mesh& mesh = jobs[i].parsed.mesh;
    const auto& [space, profile] = spaces.at(mesh.level);
    require(mesh.N == space->size(), ErrorKind::consistency, "mesh N does not match the configured space");
    const StrategyConfig* sc = find_strategy(cfg, short_name(mesh.strategy));
    VerifyOptions vo;
    if (sc) {
      vo.delta = sc->delta;
      vo.k = sc->k;
    }
    vo.compute_c_hat = cfg.sweep.compute_c_hat;
    vo.lp_grid = cfg.sweep.lp_grid;
    vo.l2_trials = cfg.l2_trials;
    vo.seed = mesh.seed;
    jobs[i].report = verify_mesh(mesh, *space, *profile, vo);
  });

  bool all = true;
  std::ostringstream summary;
  summary << "# config_hash=" << hash << "\nmesh\tstrategy\tlevel\tN\tM\tgram_deviation\tC_hat\tall_pass\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = jobs[i].report;
    const std::string stem = paths[i].stem().string();
    write_atomic(out_dir(cfg) / "reports" / (stem + ".report.txt"),
                 "config_hash=" + hash + "\nmesh=" + paths[i].filename().string() + "\n" + format_report(r) +
                     "all_pass=" + (r.all_pass() ? "true" : "false") + "\n");
    write_atomic(out_dir(cfg) / "reports" / (stem + ".report.json"),
                 report_json(r, hash, paths[i].filename().string()).dump(2) + "\n");
    summary << paths[i].filename().string() << '\t' << r.strategy << '\t' << r.level << '\t' << r.N << '\t' << r.M
            << '\t' << num(r.gram_deviation) << '\t' << num(r.C_hat) << '\t' << r.all_pass() << '\n';
    all = all && r.all_pass();
  }
  write_atomic(out_dir(cfg) / "verify.tsv", summary.str());
  std::cout << summary.str();
  return all ? kPass : kVerificationFailure;
}

int cmd_cover(const RunOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const SweepConfig& sw = cfg.sweep;
  const double k = o.k ? *o.k : cover_k(cfg);
  const std::string hash = write_resolved(cfg);

  struct Result {
    WeightedCovering cover;
    bool valid = false;
  };
  std::vector<Result> res(sw.levels.size());
  parallel_for(res.size(), sw.jobs, [&](std::size_t l) {
    const SpacePtr space = make_space(sw.space, sw.levels[l]);
    res[l].cover = cover_space(*space, k, sw.grid);
    const WeightTable table = weight_table(*space, res[l].cover.epsilon, sw.grid);
    res[l].valid = validate_weighted_cover(table, res[l].cover.centers, res[l].cover.epsilon);
  });

  bool all = true;
  std::ostringstream summary;
  summary << "# config_hash=" << hash << "\nlevel\tN\tk\tepsilon\tR_mu\tsize\tG\tmax_residual\tslack\tvalid\n";
  for (std::size_t l = 0; l < res.size(); ++l) {
    const WeightedCovering& c = res[l].cover;
    const bool ok = res[l].valid && c.max_residual <= 1e-9;
    all = all && ok;
    std::ostringstream os;
    os << "# rwam-cover\n# config_hash=" << hash << "\n# level=" << sw.levels[l] << "\n# N=" << c.N
       << "\n# k=" << num(c.k) << "\n# epsilon=" << num(c.epsilon) << "\n# R_mu=" << num(c.R_mu)
       << "\n# size=" << c.size() << "\n# G=" << num(c.G) << "\n# max_residual=" << num(c.max_residual)
       << "\n# slack=" << num(c.slack) << "\n# valid=" << (ok ? "true" : "false") << "\n";
    char buf[64];
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (Eigen::Index j = 0; j < c.centers.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g ", c.centers(static_cast<Eigen::Index>(i), j));
        os << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g", c.radii[i]);
      os << buf << '\n';
    }
    write_atomic(out_dir(cfg) / "covers" / ("cover_n" + std::to_string(sw.levels[l]) + ".txt"), os.str());
    summary << sw.levels[l] << '\t' << c.N << '\t' << num(c.k) << '\t' << num(c.epsilon) << '\t' << num(c.R_mu)
            << '\t' << c.size() << '\t' << num(c.G) << '\t' << num(c.max_residual) << '\t' << num(c.slack) << '\t'
            << ok << '\n';
  }
  write_atomic(out_dir(cfg) / "covers.tsv", summary.str());
  std::cout << summary.str();
  return all ? kPass : kVerificationFailure;
}

int cmd_sweep(const RunOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const std::string hash = write_resolved(cfg);
  const SweepResult result = experiment_sweep(cfg.sweep);
  write_atomic(out_dir(cfg) / "results.tsv", "# config_hash=" + hash + "\n" + sweep_table(result.rows));

  std::size_t passed = 0, errors = 0;
  for (const auto& r : result.rows) {
    passed += r.pass && r.error.empty();
    errors += !r.error.empty();
  }
  json fits = json::array();
  for (const auto& f : result.fits) {
    json j = {{"strategy", f.strategy}};
    j["a_fit"] = f.a_fit ? fit_json(*f.a_fit) : json(nullptr);
    j["b_fit"] = f.b_fit ? fit_json(*f.b_fit) : json(nullptr);
    j["error"] = f.error;
    fits.push_back(j);
  }
  const json summary = {{"config_hash", hash},
                        {"rows", result.rows.size()},
                        {"passed", passed},
                        {"errors", errors},
                        {"fits", fits}};
  write_atomic(out_dir(cfg) / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return passed == result.rows.size() ? kPass : kVerificationFailure;
}

int cmd_haar(const RunOptions& o, std::optional<int> M, std::optional<std::size_t> trials) {
  ExperimentConfig cfg = resolve(o);
  if (M) cfg.haar.M = *M;
  if (trials) cfg.haar.trials = *trials;
  require(cfg.haar.M >= 1 && cfg.haar.trials >= 1, ErrorKind::config, "haar M and trials must be >= 1");
  ensure_directory(out_dir(cfg));
  const HaarResult h = haar_failure_experiment(cfg.haar.M, cfg.haar.trials, cfg.sweep.seed);
  const bool ok = std::abs(h.rate - h.expected) <= 3.0 * h.sigma;
  const json j = {{"M", h.M},        {"trials", h.trials}, {"failures", h.failures}, {"rate", h.rate},
                  {"expected", h.expected}, {"sigma", h.sigma},   {"seed", cfg.sweep.seed}, {"within_3_sigma", ok}};
  write_atomic(out_dir(cfg) / "haar.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return ok ? kPass : kVerificationFailure;
}

int run(int argc, char** argv) {
  CLI::App app{"Randomized weakly admissible meshes: generation and certification"};
  app.require_subcommand(1);
  RunOptions opt;
  std::vector<std::string> meshes;
  std::optional<int> haar_M;
  std::optional<std::size_t> haar_trials;

  auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config,--space", opt.config_path, "Experiment config (YAML)");
    if (config_required) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
    sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "Output directory (overrides the config)");
    sub->add_option("--strategy", opt.strategies, "Strategy filter: mu, muv, uniform, nu");
    sub->add_option("--k", opt.k, "Admissible mesh constant k > 2");
  };
  auto* info = app.add_subcommand("space-info", "Per-level N, K_mu, R_mu and Christoffel range");
  auto* build = app.add_subcommand("build", "Generate meshes for every level, strategy and trial");
  auto* verify = app.add_subcommand("verify", "Certify mesh files against the config");
  auto* cover = app.add_subcommand("cover", "Greedy gradient-weighted covers per level");
  auto* sweep = app.add_subcommand("sweep", "Build and verify every cell, fit exponents");
  auto* haar = app.add_subcommand("haar", "Failure rate of random meshes for a discontinuous space");
  for (auto* s : {info, build, verify, cover, sweep}) common(s, true);
  common(haar, false);
  verify->add_option("--mesh", meshes, "Mesh files (default: every mesh under <out>/meshes)");
  haar->add_option("--M", haar_M, "Points per mesh");
  haar->add_option("--trials", haar_trials, "Number of meshes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*info) return cmd_space_info(opt);
    if (*build) return cmd_build(opt);
    if (*verify) return cmd_verify(opt, meshes);
    if (*cover) return cmd_cover(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*haar) return cmd_haar(opt, haar_M, haar_trials);
  } catch (const Error& e) {
    std::cerr << "rwam: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::config:
      case ErrorKind::consistency: return kConfigError;
      case ErrorKind::io: return kIoError;
      default: return kVerificationFailure;
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "rwam: io error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "rwam: error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return kConfigError;
}

}  // namespace rwam::app
