#pragma once

#include <stdexcept>
#include <string>

namespace dlme {

// Shape disagreement between operands.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (CLI flags, config file, input files).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data (CSV cells, ragged rows, checkpoints).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure at run time: divergence, failed verification check.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geometry too degenerate to process (coincident points, collinear patches).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset generator could not satisfy its own constraints.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dlme
