#pragma once

#include <stdexcept>
#include <string>

namespace capax {

/// Failure categories surfaced by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
  InvalidDomain,
  UnsupportedDimension,
  Solver,
  Quadrature,
  OutOfContract,
  DomainOfDefinition,
  LevelNotStarshaped,
  Extraction,
  UndefinedNormal,
  Clearance,
  Usage,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Linear solve failed; carries the reciprocal condition estimate of the system.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double rcond)
      : Error(ErrorKind::Solver, what), rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

}  // namespace capax
