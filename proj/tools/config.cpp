#include "config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rwam/error.hpp"

namespace rwam::app {
namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void error(const YAML::Node& node, const std::string& key, const std::string& what) const {
    std::string where = origin_;
    if (node.IsDefined() && node.Mark().line >= 0) where += ":" + std::to_string(node.Mark().line + 1);
    fail(ErrorKind::config, where + ": " + key + ": " + what);
  }

  void allow(const YAML::Node& map, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) error(map, path.empty() ? "<root>" : path, "expected a mapping");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) error(kv.first, join(path, key), "unknown key");
    }
  }

  template <typename T>
  void get(const YAML::Node& map, const std::string& path, const char* key, T& out) const {
    const YAML::Node node = map[key];
    if (!node.IsDefined() || node.IsNull()) return;
    try {
      out = node.as<T>();
    } catch (const YAML::Exception&) {
      error(node, join(path, key), "invalid value '" + scalar(node) + "'");
    }
  }

  template <typename T>
  void get_opt(const YAML::Node& map, const std::string& path, const char* key, std::optional<T>& out) const {
    const YAML::Node node = map[key];
    if (!node.IsDefined() || node.IsNull()) return;
    T v{};
    get(map, path, key, v);
    out = v;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  static std::string scalar(const YAML::Node& node) { return node.IsScalar() ? node.Scalar() : "<non-scalar>"; }
  std::string origin_;
};

std::vector<int> parse_levels(const Reader& rd, const YAML::Node& node) {
  if (node.IsScalar()) {
    static const std::regex range(R"(\s*(\d+)\s*\.\.\s*(\d+)\s*)");
    std::smatch m;
    const std::string text = node.Scalar();
    if (std::regex_match(text, m, range)) {
      const int a = std::stoi(m[1]), b = std::stoi(m[2]);
      if (a > b) rd.error(node, "space.levels", "empty range '" + text + "'");
      std::vector<int> out;
      for (int n = a; n <= b; ++n) out.push_back(n);
      return out;
    }
  }
  std::vector<int> out;
  try {
    out = node.as<std::vector<int>>();
  } catch (const YAML::Exception&) {
    rd.error(node, "space.levels", "expected a list of integers or a range 'a..b'");
  }
  return out;
}

void read_grid(const Reader& rd, const YAML::Node& node, const std::string& path, GridSpec& grid) {
  if (!node.IsDefined() || node.IsNull()) return;
  rd.allow(node, path, {"target_hr", "max_points", "coarse_per_axis", "points_per_axis"});
  rd.get(node, path, "target_hr", grid.target_hr);
  rd.get(node, path, "max_points", grid.max_points);
  rd.get(node, path, "coarse_per_axis", grid.coarse_per_axis);
  rd.get(node, path, "points_per_axis", grid.points_per_axis);
  if (!(grid.target_hr > 0.0)) rd.error(node["target_hr"], path + ".target_hr", "must be > 0");
  if (grid.max_points < 2) rd.error(node["max_points"], path + ".max_points", "must be >= 2");
  if (grid.coarse_per_axis < 2) rd.error(node["coarse_per_axis"], path + ".coarse_per_axis", "must be >= 2");
  for (int p : grid.points_per_axis)
    if (p < 2) rd.error(node["points_per_axis"], path + ".points_per_axis", "entries must be >= 2");
}

nlohmann::json grid_json(const GridSpec& g) {
  return {{"target_hr", g.target_hr},
          {"max_points", g.max_points},
          {"coarse_per_axis", g.coarse_per_axis},
          {"points_per_axis", g.points_per_axis}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail(ErrorKind::config, origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  const Reader rd(origin);
  if (root.IsNull()) rd.error(root, "<root>", "empty configuration");
  rd.allow(root, "",
           {"space", "strategies", "trials", "seed", "output", "compute_c_hat", "l2_trials", "grid", "lp_grid",
            "haar"});
  ExperimentConfig cfg;
  SweepConfig& sw = cfg.sweep;

  const YAML::Node space = root["space"];
  if (!space.IsDefined()) rd.error(root, "space", "missing section");
  rd.allow(space, "space", {"family", "d", "levels", "alpha", "beta", "lower", "upper", "indices"});
  SpaceSpec& sp = sw.space;
  rd.get(space, "space", "family", sp.family);
  rd.get(space, "space", "d", sp.dim);
  rd.get(space, "space", "alpha", sp.alpha);
  rd.get(space, "space", "beta", sp.beta);
  rd.get(space, "space", "lower", sp.lower);
  rd.get(space, "space", "upper", sp.upper);
  rd.get(space, "space", "indices", sp.indices);
  static const std::set<std::string> families{"jacobi", "chebyshev", "legendre", "exponential", "custom-monomial"};
  if (!families.count(sp.family))
    rd.error(space["family"], "space.family",
             "unknown family '" + sp.family + "' (expected jacobi, chebyshev, legendre, exponential or custom-monomial)");
  if (sp.dim < 1) rd.error(space["d"], "space.d", "must be >= 1");
  if (sp.family == "jacobi" && !(sp.alpha > -1.0 && sp.beta > -1.0))
    rd.error(space, "space.alpha", "Jacobi parameters must exceed -1");
  for (const auto& idx : sp.indices)
    if (static_cast<int>(idx.size()) != sp.dim) rd.error(space["indices"], "space.indices", "entries must have d components");
  if (!space["levels"].IsDefined()) rd.error(space, "space.levels", "missing key");
  sw.levels = parse_levels(rd, space["levels"]);
  if (sw.levels.empty()) rd.error(space["levels"], "space.levels", "must not be empty");
  for (int n : sw.levels)
    if (n < 0) rd.error(space["levels"], "space.levels", "levels must be >= 0");
  try {
    (void)sp.box();
  } catch (const Error& e) {
    rd.error(space, "space", e.what());
  }

  const YAML::Node strategies = root["strategies"];
  if (strategies.IsDefined() && !strategies.IsNull()) {
    if (!strategies.IsSequence()) rd.error(strategies, "strategies", "expected a list");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      const YAML::Node s = strategies[i];
      const std::string path = "strategies[" + std::to_string(i) + "]";
      rd.allow(s, path, {"name", "delta", "r", "k", "qstar", "count_rule", "covering_size"});
      if (!s["name"].IsDefined()) rd.error(s, path + ".name", "missing key");
      std::string name;
      rd.get(s, path, "name", name);
      StrategyConfig sc;
      try {
        const Strategy kind = parse_strategy(name);
        if (kind == Strategy::manual) fail(ErrorKind::config, "manual is not a generating strategy");
        sc = strategy_defaults(kind);
      } catch (const Error& e) {
        rd.error(s["name"], path + ".name", e.what());
      }
      if (!seen.insert(sc.name).second) rd.error(s["name"], path + ".name", "duplicate strategy '" + sc.name + "'");
      rd.get(s, path, "delta", sc.delta);
      rd.get(s, path, "r", sc.r);
      rd.get(s, path, "k", sc.k);
      rd.get_opt(s, path, "qstar", sc.qstar);
      rd.get(s, path, "count_rule", sc.count_rule);
      rd.get_opt(s, path, "covering_size", sc.covering_size);
      if (!(sc.delta > 0.0 && sc.delta < 1.0)) rd.error(s["delta"], path + ".delta", "must lie in (0, 1)");
      if (!(sc.r > 0.0)) rd.error(s["r"], path + ".r", "must be > 0");
      if (!(sc.k > 2.0)) rd.error(s["k"], path + ".k", "must be > 2");
      if (sc.qstar && !(*sc.qstar > 0.0)) rd.error(s["qstar"], path + ".qstar", "must be > 0");
      if (sc.count_rule != "theorem" && sc.count_rule != "wls")
        rd.error(s["count_rule"], path + ".count_rule", "expected 'theorem' or 'wls'");
      if (sc.covering_size && *sc.covering_size < 2)
        rd.error(s["covering_size"], path + ".covering_size", "must be >= 2");
      sw.strategies.push_back(sc);
    }
  }

  rd.get(root, "", "trials", sw.trials);
  if (sw.trials < 0) rd.error(root["trials"], "trials", "must be >= 0");
  rd.get(root, "", "seed", sw.seed);
  rd.get(root, "", "output", cfg.output_dir);
  rd.get(root, "", "compute_c_hat", sw.compute_c_hat);
  rd.get(root, "", "l2_trials", cfg.l2_trials);
  if (cfg.l2_trials < 0) rd.error(root["l2_trials"], "l2_trials", "must be >= 0");
  read_grid(rd, root["grid"], "grid", sw.grid);
  read_grid(rd, root["lp_grid"], "lp_grid", sw.lp_grid);

  const YAML::Node haar = root["haar"];
  if (haar.IsDefined() && !haar.IsNull()) {
    rd.allow(haar, "haar", {"M", "trials"});
    rd.get(haar, "haar", "M", cfg.haar.M);
    rd.get(haar, "haar", "trials", cfg.haar.trials);
    if (cfg.haar.M < 1) rd.error(haar["M"], "haar.M", "must be >= 1");
    if (cfg.haar.trials < 1) rd.error(haar["trials"], "haar.trials", "must be >= 1");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::config, "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  const SweepConfig& sw = cfg.sweep;
  const Box box = sw.space.box();
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto& s : sw.strategies) {
    strategies.push_back({{"name", s.name},
                          {"delta", s.delta},
                          {"r", s.r},
                          {"k", s.k},
                          {"qstar", s.qstar ? nlohmann::json(*s.qstar) : nlohmann::json(nullptr)},
                          {"count_rule", s.count_rule},
                          {"covering_size", s.covering_size ? nlohmann::json(*s.covering_size) : nlohmann::json(nullptr)}});
  }
  return {{"space",
           {{"family", sw.space.family},
            {"d", sw.space.dim},
            {"levels", sw.levels},
            {"alpha", sw.space.alpha},
            {"beta", sw.space.beta},
            {"lower", box.lower()},
            {"upper", box.upper()},
            {"indices", sw.space.indices}}},
          {"strategies", strategies},
          {"trials", sw.trials},
          {"seed", sw.seed},
          {"compute_c_hat", sw.compute_c_hat},
          {"l2_trials", cfg.l2_trials},
          {"grid", grid_json(sw.grid)},
          {"lp_grid", grid_json(sw.lp_grid)},
          {"haar", {{"M", cfg.haar.M}, {"trials", cfg.haar.trials}}}};
}

std::string canonical_text(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string short_name(Strategy s) {
  switch (s) {
    case Strategy::mu_wam: return "mu";
    case Strategy::muv_wam: return "muv";
    case Strategy::uniform_am: return "uniform";
    case Strategy::nu_am: return "nu";
    case Strategy::manual: break;
  }
  return "manual";
}

StrategyConfig strategy_defaults(Strategy s) {
  StrategyConfig sc;
  sc.name = short_name(s);
  if (s == Strategy::uniform_am || s == Strategy::nu_am) sc.r = 1.5;
  return sc;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(canonical_text(cfg)); }

}  // namespace rwam::app
