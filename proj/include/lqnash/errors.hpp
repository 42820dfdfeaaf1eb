#pragma once

#include <stdexcept>
#include <string>

namespace lqnash {

// Base of every error thrown by the library.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Branch probabilities non-positive, not summing to one, or an unknown preset.
class InvalidSpec : public SolverError {
 public:
  using SolverError::SolverError;
};

// Conditional mean or variance of a branch distribution outside tolerance.
class MomentViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

// A tree process handed to an operation at the wrong level.
class LevelMismatch : public SolverError {
 public:
  using SolverError::SolverError;
};

// Values of a tree process disagree in shape.
class ShapeMismatch : public SolverError {
 public:
  using SolverError::SolverError;
};

class DimensionMismatch : public SolverError {
 public:
  using SolverError::SolverError;
};

// A process violates the storage convention (wrong level range or node count).
class NonAdaptedProcess : public SolverError {
 public:
  using SolverError::SolverError;
};

// Backward solve invoked on data that fails the standing assumptions.
class AssumptionViolated : public SolverError {
 public:
  using SolverError::SolverError;
};

// The gain system matrix fell below the conditioning gate at some node; the
// backward recursion is not solvable at the requested tolerance.
class SingularUpsilon : public SolverError {
 public:
  SingularUpsilon(int level, int node, double rcond);
  int level() const { return level_; }
  int node() const { return node_; }
  double rcond() const { return rcond_; }

 private:
  int level_;
  int node_;
  double rcond_;
};

// Best-response Hessian is not positive definite.
class IndefiniteHessian : public SolverError {
 public:
  using SolverError::SolverError;
};

// A size/configuration cap was exceeded (e.g. oracle problem too large).
class ConfigurationError : public SolverError {
 public:
  using SolverError::SolverError;
};

// Malformed input document (JSON syntax or schema).
class ParseError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace lqnash
