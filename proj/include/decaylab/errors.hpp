#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

/// Argument outside the mathematical domain of an operation (t <= 0, alpha out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a point where the kernel is singular.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested feature is outside what is implemented (derivative order > 3, q <= 1, ...).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid shape or file contents that violate the GridSpec contract.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periodic-box surrogate would be dominated by truncation effects.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mesh-halving estimate for a time integral exceeded its tolerance.
class RefinementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or divergence inside an iterative solver.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (maps to exit code 64 in the CLI).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace decaylab
