#pragma once

#include <stdexcept>
#include <string>

namespace edgewall {

/// Invalid input outside an operation's domain (non-positive spacing, bad angle, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A principal-value evaluation hit a jump of the operand at a half-line endpoint.
class SingularEndpointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Time stepping produced non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Energy kept increasing along the flow; the time step is too large.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Malformed input file; `line()` is 1-based (0 when not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Decay fit requested on a window where it is undefined.
class WindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace edgewall
