#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace carleson {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point at or beyond the boundary guard |z| < 1 - kBoundaryGuard, or a
/// parameter outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A linear-algebra step is too ill-conditioned to trust (clustered nodes,
/// singular Gram matrices, near-defective spectra).
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A constructive procedure could not satisfy its bound at a given step.
class ConstructionError : public Error {
 public:
  ConstructionError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Inconsistent input data (conflicting jets, malformed schemas).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace carleson
