#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwam {

/// Failure categories raised by the library. The CLI maps these onto
/// process exit codes.
enum class ErrorKind {
  domain,          // point outside the domain
  unsupported,     // operation not available for this family / domain
  rank,            // numerical rank deficiency
  envelope,        // rejection envelope violated
  efficiency,      // rejection sampler acceptance rate collapsed
  precondition,    // documented precondition not met
  level_too_small, // N_n = 1, log N_n = 0
  shape,           // matrix shape mismatch (e.g. M < N)
  consistency,     // mismatched artifacts (covering vs space, mesh vs config)
  resolution,      // grid too coarse for the requested epsilon
  fit,             // not enough levels for a regression
  config,          // invalid configuration
  io,              // filesystem failure
  numerical,       // solver did not converge
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace rwam
