#include "rwam/meshgen.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rwam/error.hpp"
#include "rwam/rng.hpp"

namespace rwam {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::mu_wam: return "mu-wam";
    case Strategy::muv_wam: return "muV-wam";
    case Strategy::uniform_am: return "uniform-am";
    case Strategy::nu_am: return "nu-am";
    case Strategy::manual: return "manual";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "mu" || name == "mu-wam") return Strategy::mu_wam;
  if (name == "muv" || name == "muV" || name == "muV-wam" || name == "muv-wam") return Strategy::muv_wam;
  if (name == "uniform" || name == "uniform-am") return Strategy::uniform_am;
  if (name == "nu" || name == "nu-am") return Strategy::nu_am;
  if (name == "manual") return Strategy::manual;
  fail(ErrorKind::config, "unknown strategy '" + std::string(name) + "' (expected mu, muv, uniform or nu)");
}

double SampleRule::get(std::string_view key) const {
  for (const auto& [k, v] : constants)
    if (k == key) return v;
  fail(ErrorKind::consistency, "rule has no constant '" + std::string(key) + "'");
}

void SampleRule::set(std::string key, double value) {
  for (auto& [k, v] : constants) {
    if (k == key) {
      v = value;
      return;
    }
  }
  constants.emplace_back(std::move(key), value);
}

std::size_t wls_sample_count(double kappa, double delta, double r) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::precondition, "delta must lie in (0, 1)");
  require(r > 0.0, ErrorKind::precondition, "r must be positive");
  require(kappa >= 1.0, ErrorKind::precondition, "kappa must be >= 1");
  const double c = 3.0 * (1.0 + r) / (delta * delta) * kappa;
  auto ok = [c](double M) { return M / std::log(M) >= c; };
  // M / ln M decreases from M = 2 to M = 3 and increases afterwards.
  if (ok(2.0)) return 2;
  double M = std::max(3.0, std::ceil(c * std::log(c)));
  while (M > 3.0 && ok(M - 1.0)) M -= 1.0;
  while (!ok(M)) M += 1.0;
  return static_cast<std::size_t>(M);
}

double box_alpha(const Box& box) noexcept { return std::ldexp(1.0, -box.dim()); }

namespace {

void require_level(std::size_t N) {
  if (N < 2) fail(ErrorKind::level_too_small, "N = 1 gives log N = 0; the sample-count formula is void");
}

std::size_t ceil_count(double v) {
  require(std::isfinite(v) && v < 1e12, ErrorKind::precondition, "sample count is not finite or too large");
  return static_cast<std::size_t>(std::ceil(v - 1e-12 * std::max(1.0, v)));
}

}  // namespace

std::size_t mu_mesh_size(double q_star, double K_mu, std::size_t N) {
  require(q_star >= 1.0, ErrorKind::precondition, "q* must be >= 1");
  require_level(N);
  return ceil_count(25.0 * q_star * K_mu * std::log(static_cast<double>(N)));
}

std::size_t muv_mesh_size(std::size_t N) {
  require_level(N);
  return ceil_count(25.0 * static_cast<double>(N) * std::log(static_cast<double>(N)));
}

std::size_t am_mesh_size(double alpha, double r, double G, std::size_t covering_size) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::precondition, "alpha must lie in (0, 1]");
  require(G >= 1.0, ErrorKind::precondition, "G must be >= 1");
  require(covering_size >= 2, ErrorKind::level_too_small, "covering size must be >= 2");
  const double cs = static_cast<double>(covering_size);
  return ceil_count((r + 1.0) * G * cs * std::log(cs) / alpha);
}

double constant_residual(const FunctionSpace& space) {
  const Quadrature q = space.reference_quadrature();
  const Eigen::MatrixXcd v = space.eval(q.nodes);
  const Eigen::VectorXcd c = v.adjoint() * q.weights.cast<std::complex<double>>();
  const Eigen::VectorXcd e = Eigen::VectorXcd::Ones(v.rows()) - v * c;
  return std::sqrt(std::max(0.0, (q.weights.array() * e.array().abs2()).sum()));
}

Mesh build_mu_mesh(const SpacePtr& space, const KernelProfile& profile, double q_star, std::uint64_t seed,
                   std::string qstar_source) {
  const std::size_t N = space->size();
  const double K = profile.K_upper();
  const std::size_t M = mu_mesh_size(q_star, K, N);
  Mesh mesh;
  SampleRun run = sample_mu(*space, M, seed);
  mesh.points = std::move(run.points);
  mesh.diagnostics = run.diagnostics;
  mesh.strategy = Strategy::mu_wam;
  mesh.level = space->level();
  mesh.N = N;
  mesh.seed = seed;
  mesh.rule.formula = "ceil(25 q* K_mu ln N)";
  mesh.rule.set("q_star", q_star);
  mesh.rule.set("K_mu", K);
  mesh.rule.set("N", static_cast<double>(N));
  mesh.rule.note = "q* source: " + qstar_source;
  return mesh;
}

Mesh build_muV_mesh(const SpacePtr& space, std::uint64_t seed, const MuVOptions& options) {
  const std::size_t N = space->size();
  require_level(N);
  const double res = constant_residual(*space);
  if (res > 1e-8)
    fail(ErrorKind::precondition, "the constant function is not in the span (residual " + std::to_string(res) + ")");
  Mesh mesh;
  std::size_t M = 0;
  if (options.count_rule == "theorem") {
    M = muv_mesh_size(N);
    mesh.rule.formula = "ceil(25 N ln N)";
  } else if (options.count_rule == "wls") {
    M = wls_sample_count(static_cast<double>(N), options.delta, options.r);
    mesh.rule.formula = "min M: M / ln M >= 3 (1 + r) N / delta^2";
    mesh.rule.set("delta", options.delta);
    mesh.rule.set("r", options.r);
  } else {
    fail(ErrorKind::config, "unknown muv count rule '" + options.count_rule + "'");
  }
  mesh.rule.set("N", static_cast<double>(N));
  InducedSampler sampler(space);
  SampleRun run = sampler.sample(M, seed);
  mesh.points = std::move(run.points);
  mesh.diagnostics = run.diagnostics;
  mesh.strategy = Strategy::muv_wam;
  mesh.level = space->level();
  mesh.N = N;
  mesh.seed = seed;
  return mesh;
}

namespace {

void check_am_constants(double k, double r) {
  require(k > 2.0, ErrorKind::precondition, "k must exceed 2");
  require(r > 1.0, ErrorKind::precondition, "r must exceed 1");
}

void record_am(Mesh& mesh, const Box& box, const KernelProfile& profile, double k, double r) {
  mesh.rule.set("alpha", box_alpha(box));
  mesh.rule.set("r", r);
  mesh.rule.set("k", k);
  // r0 = (k min R)^-1 evaluated on the current level; alpha holds for radii
  // up to the shortest box edge.
  mesh.rule.set("r0", profile.R_min > 0.0 ? 1.0 / (k * profile.R_min) : std::numeric_limits<double>::infinity());
  mesh.rule.set("radius_cap", box.min_width());
}

}  // namespace

Mesh build_uniform_am_mesh(const SpacePtr& space, const KernelProfile& profile, double k, double r,
                           std::size_t covering_size, std::uint64_t seed) {
  check_am_constants(k, r);
  const std::size_t N = space->size();
  require(covering_size >= N, ErrorKind::precondition, "covering size must be >= N");
  const Box& box = space->domain();
  const std::size_t M = am_mesh_size(box_alpha(box), r, 1.0, covering_size);
  Mesh mesh;
  Rng rng(seed);
  mesh.points.resize(static_cast<Eigen::Index>(M), box.dim());
  for (Eigen::Index m = 0; m < mesh.points.rows(); ++m)
    for (int j = 0; j < box.dim(); ++j) mesh.points(m, j) = rng.uniform(box.lower(j), box.upper(j));
  mesh.diagnostics = {M, M};
  mesh.strategy = Strategy::uniform_am;
  mesh.level = space->level();
  mesh.N = N;
  mesh.seed = seed;
  mesh.rule.formula = "ceil(alpha^-1 (r + 1) |cover| ln |cover|)";
  record_am(mesh, box, profile, k, r);
  mesh.rule.set("covering_size", static_cast<double>(covering_size));
  return mesh;
}

Mesh build_nu_am_mesh(const SpacePtr& space, const KernelProfile& profile, double k, double r,
                      const WeightedCovering& covering, std::uint64_t seed) {
  check_am_constants(k, r);
  const std::size_t N = space->size();
  if (covering.level != space->level() || covering.N != N)
    fail(ErrorKind::consistency, "covering was built for level " + std::to_string(covering.level) + " (N = " +
                                     std::to_string(covering.N) + "), space is level " +
                                     std::to_string(space->level()) + " (N = " + std::to_string(N) + ")");
  if (std::abs(covering.k - k) > 1e-12 * k || std::abs(covering.epsilon * k * covering.R_mu - 1.0) > 1e-9)
    fail(ErrorKind::consistency, "covering epsilon does not equal 1 / (k R_mu)");
  const Box& box = space->domain();
  const std::size_t M = am_mesh_size(box_alpha(box), r, covering.G, covering.size());
  NuSampler sampler(space, profile);
  SampleRun run = sampler.sample(M, seed);
  Mesh mesh;
  mesh.points = std::move(run.points);
  mesh.diagnostics = run.diagnostics;
  mesh.strategy = Strategy::nu_am;
  mesh.level = space->level();
  mesh.N = N;
  mesh.seed = seed;
  mesh.rule.formula = "ceil(alpha^-1 (r + 1) G |cover| ln |cover|)";
  record_am(mesh, box, profile, k, r);
  mesh.rule.set("G", covering.G);
  mesh.rule.set("covering_size", static_cast<double>(covering.size()));
  mesh.rule.set("epsilon", covering.epsilon);
  return mesh;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_mesh(const Mesh& mesh, std::string_view config_hash) {
  std::ostringstream os;
  os << "# rwam-mesh\n";
  if (!config_hash.empty()) os << "# config_hash=" << config_hash << "\n";
  os << "# strategy=" << to_string(mesh.strategy) << "\n";
  os << "# level=" << mesh.level << "\n";
  os << "# N=" << mesh.N << "\n";
  os << "# M=" << mesh.M() << "\n";
  os << "# d=" << mesh.points.cols() << "\n";
  os << "# seed=" << mesh.seed << "\n";
  os << "# rule=" << mesh.rule.formula << "\n";
  for (const auto& [k, v] : mesh.rule.constants) os << "# rule." << k << "=" << fmt(v) << "\n";
  if (!mesh.rule.note.empty()) os << "# note=" << mesh.rule.note << "\n";
  os << "# proposals=" << mesh.diagnostics.proposals << "\n";
  os << "# accepts=" << mesh.diagnostics.accepts << "\n";
  for (Eigen::Index m = 0; m < mesh.points.rows(); ++m) {
    for (Eigen::Index j = 0; j < mesh.points.cols(); ++j) os << (j ? " " : "") << fmt(mesh.points(m, j));
    os << "\n";
  }
  return os.str();
}

ParsedMesh parse_mesh(std::string_view text) {
  ParsedMesh out;
  Mesh& mesh = out.mesh;
  std::istringstream is{std::string(text)};
  std::string line;
  std::vector<std::vector<double>> pts;
  long d = -1;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "config_hash") out.config_hash = val;
        else if (key == "strategy") mesh.strategy = parse_strategy(val);
        else if (key == "level") mesh.level = std::stoi(val);
        else if (key == "N") mesh.N = std::stoull(val);
        else if (key == "d") d = std::stol(val);
        else if (key == "seed") mesh.seed = std::stoull(val);
        else if (key == "rule") mesh.rule.formula = val;
        else if (key.rfind("rule.", 0) == 0) mesh.rule.set(key.substr(5), std::stod(val));
        else if (key == "note") mesh.rule.note = val;
        else if (key == "proposals") mesh.diagnostics.proposals = std::stoull(val);
        else if (key == "accepts") mesh.diagnostics.accepts = std::stoull(val);
      } catch (const std::logic_error&) {
        fail(ErrorKind::io, "mesh header line " + std::to_string(lineno) + ": bad value for '" + key + "'");
      }
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> p;
    double v;
    while (ls >> v) p.push_back(v);
    if (!ls.eof()) fail(ErrorKind::io, "mesh line " + std::to_string(lineno) + ": not a list of numbers");
    if (d < 0) d = static_cast<long>(p.size());
    if (static_cast<long>(p.size()) != d)
      fail(ErrorKind::io, "mesh line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " coordinates");
    pts.push_back(std::move(p));
  }
  mesh.points.resize(static_cast<Eigen::Index>(pts.size()), d < 0 ? 0 : d);
  for (std::size_t m = 0; m < pts.size(); ++m)
    for (long j = 0; j < d; ++j) mesh.points(static_cast<Eigen::Index>(m), j) = pts[m][j];
  return out;
}

}  // namespace rwam
