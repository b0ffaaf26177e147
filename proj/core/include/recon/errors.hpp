#pragma once

#include <stdexcept>
#include <string>

namespace recon {

/// Input outside an operation's domain (bad grid, non-finite price inputs, d >= t_N, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A solver could not produce a solution (overflow guard, degenerate roots, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the tridiagonal stationarity solve when a pivot is not positive.
class IndefiniteSystemError : public SolverError {
 public:
  IndefiniteSystemError(const std::string& what, int pivot_sign, std::size_t row)
      : SolverError(what), pivot_sign_(pivot_sign), row_(row) {}

  /// -1 for a negative pivot, 0 for an exactly singular one.
  int pivot_sign() const noexcept { return pivot_sign_; }
  std::size_t row() const noexcept { return row_; }

 private:
  int pivot_sign_;
  std::size_t row_;
};

/// Malformed or incomplete run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace recon
