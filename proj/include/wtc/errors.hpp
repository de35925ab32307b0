#pragma once

#include <stdexcept>
#include <string>

namespace wtc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (t <= 0, p outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent estimator or study configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too few usable observations.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// The data are degenerate for the requested statistic (ties, zero denominators).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Input could not be read or parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A root-finding problem has no sign change on its admissible interval.
class NoRootError : public Error {
 public:
  enum class Side { lower, upper, flat };

  NoRootError(const std::string& what, Side side) : Error(what), side_(side) {}

  Side side() const noexcept { return side_; }

 private:
  Side side_;
};

/// An iteration failed to converge within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace wtc
