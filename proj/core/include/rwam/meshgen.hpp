#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rwam/covering.hpp"
#include "rwam/function_space.hpp"
#include "rwam/kernel.hpp"
#include "rwam/measures.hpp"

namespace rwam {

enum class Strategy { mu_wam, muv_wam, uniform_am, nu_am, manual };

std::string_view to_string(Strategy s) noexcept;
/// Accepts the CLI names mu | muv | uniform | nu as well as the tags.
Strategy parse_strategy(std::string_view name);

/// Formula and constants that produced a mesh size.
struct SampleRule {
  std::string formula;
  std::vector<std::pair<std::string, double>> constants;
  std::string note;

  double get(std::string_view key) const;
  void set(std::string key, double value);
};

struct Mesh {
  PointSet points;
  Strategy strategy = Strategy::manual;
  int level = 0;
  std::size_t N = 0;
  SampleRule rule;
  std::uint64_t seed = 0;
  SamplerDiagnostics diagnostics;

  std::size_t M() const noexcept { return static_cast<std::size_t>(points.rows()); }
};

/// Smallest integer M >= 2 with M / ln M >= c, c = 3 (1 + r) kappa / delta^2.
std::size_t wls_sample_count(double kappa, double delta, double r);

/// Volume-ratio constant of a box: a ball centered in the box keeps at least
/// an orthant of its volume for radii up to the shortest edge.
double box_alpha(const Box& box) noexcept;

std::size_t mu_mesh_size(double q_star, double K_mu, std::size_t N);
std::size_t muv_mesh_size(std::size_t N);
std::size_t am_mesh_size(double alpha, double r, double G, std::size_t covering_size);

/// Residual of projecting the constant 1 onto the space under its reference
/// quadrature.
double constant_residual(const FunctionSpace& space);

/// M = ceil(25 q* K_mu ln N) draws from mu. K_mu is the profile's upper
/// estimate. `qstar_source` is recorded in the rule (analytic or estimated).
Mesh build_mu_mesh(const SpacePtr& space, const KernelProfile& profile, double q_star, std::uint64_t seed,
                   std::string qstar_source = "analytic");

struct MuVOptions {
  /// "theorem": 25 N ln N. "wls": wls_sample_count(N, delta, r).
  std::string count_rule = "theorem";
  double delta = 0.5;
  double r = 1.0;
};

Mesh build_muV_mesh(const SpacePtr& space, std::uint64_t seed, const MuVOptions& options = {});

/// M = ceil(alpha^-1 (r + 1) |cover| ln |cover|) uniform draws.
Mesh build_uniform_am_mesh(const SpacePtr& space, const KernelProfile& profile, double k, double r,
                           std::size_t covering_size, std::uint64_t seed);

/// M = ceil(alpha^-1 (r + 1) G |cover| ln |cover|) draws from nu.
Mesh build_nu_am_mesh(const SpacePtr& space, const KernelProfile& profile, double k, double r,
                      const WeightedCovering& covering, std::uint64_t seed);

/// Text dump: "# key=value" header lines, then one point per line.
std::string format_mesh(const Mesh& mesh, std::string_view config_hash = {});

struct ParsedMesh {
  Mesh mesh;
  std::string config_hash;
};
ParsedMesh parse_mesh(std::string_view text);

}  // namespace rwam
