#ifdef RWAM_HAVE_APP
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"
#include "rwam/error.hpp"

using namespace rwam;
using namespace rwam::app;

namespace {

const char* kValid = R"(space:
  family: chebyshev
  d: 2
  levels: 2..4
strategies:
  - name: muv
    count_rule: wls
  - name: nu
    k: 4
trials: 3
seed: 99
output: out-a
)";

ErrorKind kind_of(const std::string& text) {
  try {
    (void)parse_config(text, "cfg.yaml");
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::numerical;  // sentinel: no error
}

std::string message_of(const std::string& text) {
  try {
    (void)parse_config(text, "cfg.yaml");
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("rwam-unit-" + std::to_string(::getpid()) + "-" +
                                                     std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("valid config parses with defaults filled in") {
  const ExperimentConfig c = parse_config(kValid);
  CHECK(c.sweep.space.family == "chebyshev");
  CHECK(c.sweep.space.dim == 2);
  CHECK(c.sweep.levels == std::vector<int>{2, 3, 4});
  REQUIRE(c.sweep.strategies.size() == 2);
  CHECK(c.sweep.strategies[0].count_rule == "wls");
  CHECK(c.sweep.strategies[1].k == 4.0);
  CHECK(c.sweep.strategies[1].r == 1.5);
  CHECK(c.sweep.trials == 3);
  CHECK(c.sweep.seed == 99);
  CHECK(c.output_dir == "out-a");
  const nlohmann::json j = to_json(c);
  CHECK(j.contains("strategies"));
}

TEST_CASE("unknown keys and bad values name the key and line") {
  const std::string unknown = std::string(kValid) + "colour: red\n";
  CHECK(kind_of(unknown) == ErrorKind::config);
  CHECK(message_of(unknown).find("cfg.yaml:13") != std::string::npos);
  CHECK(message_of(unknown).find("colour") != std::string::npos);
  std::string bad_family = kValid;
  bad_family.replace(bad_family.find("chebyshev"), 9, "hermite");
  CHECK(kind_of(bad_family) == ErrorKind::config);
  CHECK(message_of(bad_family).find("family") != std::string::npos);
  CHECK(kind_of("space:\n  family: chebyshev\n  levels: 5..2\n") == ErrorKind::config);
  CHECK(kind_of("space:\n  family: chebyshev\n  levels: [2]\nstrategies:\n  - name: muv\n    delta: 1.5\n") ==
        ErrorKind::config);
  CHECK(kind_of("space:\n  family: chebyshev\n  levels: [2]\nstrategies:\n  - name: muv\n  - name: muv\n") ==
        ErrorKind::config);
  CHECK(kind_of("space:\n  family: chebyshev\n  levels: [2]\nstrategies:\n  - name: nu\n    k: 2\n") ==
        ErrorKind::config);
  CHECK(kind_of("space: [1, 2\n") == ErrorKind::config);
}

TEST_CASE("config hash ignores run settings and key order") {
  const ExperimentConfig a = parse_config(kValid);
  ExperimentConfig b = a;
  b.output_dir = "elsewhere";
  b.sweep.jobs = 8;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  const std::string reordered = R"(seed: 99
trials: 3
output: out-b
strategies:
  - count_rule: wls
    name: muv
  - k: 4
    name: nu
space:
  levels: [2, 3, 4]
  d: 2
  family: chebyshev
)";
  CHECK(config_hash(parse_config(reordered)) == config_hash(a));
  b.sweep.seed = 100;
  CHECK(config_hash(b) != config_hash(a));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("atomic writes and directory checks") {
  TempDir tmp;
  const auto file = tmp.path / "sub" / "x.txt";
  ensure_directory(file.parent_path());
  write_atomic(file, "hello\n");
  CHECK(read_file(file) == "hello\n");
  write_atomic(file, "second\n");
  CHECK(read_file(file) == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(file.parent_path())) ++entries;
  CHECK(entries == 1);
  try {
    read_file(tmp.path / "missing");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  std::ofstream(tmp.path / "plain") << "x";
  try {
    ensure_directory(tmp.path / "plain" / "child");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}

TEST_CASE("command line overrides and exit codes") {
  TempDir tmp;
  const auto cfg = tmp.path / "c.yaml";
  std::ofstream(cfg) << "space:\n  family: chebyshev\n  levels: [2, 3]\nstrategies:\n  - name: muv\ntrials: 2\n"
                        "lp_grid:\n  points_per_axis: [17]\n";
  RunOptions opt;
  opt.config_path = cfg.string();
  opt.seed = 5;
  opt.out = (tmp.path / "out").string();
  const ExperimentConfig r = resolve(opt);
  CHECK(r.sweep.seed == 5);
  CHECK(r.output_dir == opt.out);
  CHECK(cmd_sweep(opt) == kPass);
  CHECK(std::filesystem::exists(tmp.path / "out" / "results.tsv"));
  CHECK(std::filesystem::exists(tmp.path / "out" / "config.json"));
  const std::string first = read_file(tmp.path / "out" / "results.tsv");
  CHECK(first.rfind("# config_hash=" + config_hash(r), 0) == 0);
  CHECK(cmd_sweep(opt) == kPass);
  CHECK(read_file(tmp.path / "out" / "results.tsv") == first);

  std::string bad = "rwam", sub = "sweep", flag = "--config", path = (tmp.path / "nope.yaml").string();
  char* argv[] = {bad.data(), sub.data(), flag.data(), path.data()};
  CHECK(run(4, argv) == kConfigError);
}
#endif
