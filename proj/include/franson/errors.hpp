#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace franson {

/// Raised when a kernel receives a value outside its mathematical domain
/// (non-finite length, non-positive wavelength, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when a photon or pair reaches a stage that was configured for a
/// different wavelength, or a config block is internally inconsistent.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a caller breaks an input contract (unsorted streams,
/// mismatched sampling grids).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Fringe fitting could not produce a meaningful result.
class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Scenario validation failure; carries every violated invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
  std::vector<std::string> problems_;
};

} // namespace franson

namespace franson {

/// Output could not be written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace franson
