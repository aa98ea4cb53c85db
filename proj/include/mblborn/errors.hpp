#pragma once

#include <stdexcept>
#include <string>

namespace mblborn {

/// Bad chain/model parameters (site counts, couplings, disorder bounds).
struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operands whose dimensions do not match.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operator handed to a sector routine does not conserve total S^z.
struct SectorViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative propagator failed to reach the requested tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// NaN/Inf encountered where a finite result is required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (carries a byte offset where known).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run configuration rejected by schema validation.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mblborn
