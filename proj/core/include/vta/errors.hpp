#pragma once

#include <stdexcept>
#include <string>

namespace vta {

// File/format problems: malformed rows, bad headers, unknown keys.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: singular pivots, instability, missing boundary tags.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration cap reached; carries the best residual achieved.
class ConvergenceError : public SolverError {
public:
  ConvergenceError(const std::string& what, double achieved_residual)
      : SolverError(what), achieved_residual(achieved_residual) {}
  double achieved_residual;
};

}  // namespace vta
