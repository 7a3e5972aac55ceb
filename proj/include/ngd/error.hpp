#pragma once

#include <stdexcept>
#include <string>

namespace ngd {

/// A parameter or argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The transfer function has a pole (or, for group delay, a zero) at the
/// requested frequency.
class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, double omega)
      : std::domain_error(what), omega_(omega) {}

  [[nodiscard]] double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// Failure inside a time-domain simulation (improper or unstable system,
/// wrap-around contamination, grid mismatch).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A waveform measurement could not be taken (flat or edge peak, multiple
/// lobes, threshold never crossed).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ngd
