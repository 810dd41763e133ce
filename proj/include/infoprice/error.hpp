#pragma once

#include <stdexcept>
#include <string>

namespace infoprice {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A time argument reached (or came within the guard band of) a horizon.
class HorizonError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A root bracket does not contain a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Log weights that are all -inf, singular covariances, zero volatilities.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double error_bound)
      : Error(what), last_estimate_(last_estimate), error_bound_(error_bound) {}

  double last_estimate() const noexcept { return last_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double last_estimate_;
  double error_bound_;
};

/// Malformed configuration; `path` names the offending field (e.g. "factors[1].sigma").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace infoprice
