#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rwam/function_space.hpp"
#include "rwam/kernel.hpp"

namespace rwam {

enum class MeasureKind { base_mu, induced_muV, gradient_nu };

std::string_view to_string(MeasureKind k) noexcept;

/// Rejection bookkeeping. For tensor families the induced sampler rejects
/// axis by axis, so one proposal is one univariate draw.
struct SamplerDiagnostics {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  double rate() const noexcept {
    return proposals == 0 ? 1.0 : static_cast<double>(accepts) / static_cast<double>(proposals);
  }
};

struct SampleRun {
  PointSet points;
  SamplerDiagnostics diagnostics;
};

/// Safety factor applied to every grid-estimated rejection envelope.
inline constexpr double kEnvelopeSafety = 1.05;

/// i.i.d. draws from mu.
SampleRun sample_mu(const FunctionSpace& space, std::size_t count, std::uint64_t seed);

/// Draws from mu_V = K(x,x)/N dmu as the uniform mixture of |v_i|^2 dmu.
/// Envelopes are refreshed (raised to 1.05 x the observed ratio) when a
/// violation is detected, and an envelope error is thrown.
class InducedSampler {
 public:
  explicit InducedSampler(SpacePtr space, const GridSpec& grid = {});

  SampleRun sample(std::size_t count, std::uint64_t seed);
  /// sup |v_i|^2 bound used for component i (product over axes for
  /// tensor families).
  double envelope(std::size_t i) const;

 private:
  SpacePtr space_;
  const TensorJacobiSpace* tensor_ = nullptr;
  std::vector<double> axis_env_;  // tensor: per univariate degree
  std::vector<double> env_;       // generic: per basis element
};

/// Draws from nu with density R(x)^d / int R^d against Lebesgue measure, by
/// rejection from the uniform distribution on the box.
class NuSampler {
 public:
  NuSampler(SpacePtr space, const KernelProfile& profile);

  SampleRun sample(std::size_t count, std::uint64_t seed);
  double envelope() const noexcept { return env_; }

 private:
  SpacePtr space_;
  double env_ = 0.0;
};

SampleRun sample_induced(SpacePtr space, std::size_t count, std::uint64_t seed);
SampleRun sample_nu(SpacePtr space, std::size_t count, std::uint64_t seed, const GridSpec& grid = {});

}  // namespace rwam
