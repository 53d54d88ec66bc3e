#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace syncarena {

enum class ErrorCode {
  SingularAlgebraicLoop,
  NonPositiveInertia,
  ZeroIntegralGain,
  ZeroDamping,
  NonFiniteState,
  NoEquilibrium,
  DegenerateLevelSet,
  NeverStable,
  AlwaysStable,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the integrator; carries the simulation time of divergence.
class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(double t, const std::string& what)
      : Error(ErrorCode::NonFiniteState, what + " at t=" + std::to_string(t)), t_(t) {}

  [[nodiscard]] double time() const { return t_; }

 private:
  double t_;
};

}  // namespace syncarena
