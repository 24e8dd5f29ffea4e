#pragma once

#include <stdexcept>
#include <string>

namespace msrimg {

enum class ErrorKind {
  domain,
  convergence,
  configuration,
  numerical,
  empty_subspace,
  degenerate_steering,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

// Base for every error raised by the library. The message can be prefixed
// with context while the exception is in flight (catch by reference, call
// add_context, then `throw;`), so the dynamic type survives.
class Error : public std::exception {
 public:
  Error(ErrorKind kind, std::string message);

  ErrorKind kind() const noexcept { return kind_; }
  const char* what() const noexcept override { return message_.c_str(); }

  void add_context(const std::string& context);

 private:
  ErrorKind kind_;
  std::string message_;
};

class DomainError : public Error {
 public:
  explicit DomainError(std::string message)
      : Error(ErrorKind::domain, std::move(message)) {}
};

// Adaptive routine gave up; carries the best estimate reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string message, double best_estimate)
      : Error(ErrorKind::convergence, std::move(message)),
        best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(std::string message)
      : Error(ErrorKind::configuration, std::move(message)) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(std::string message)
      : Error(ErrorKind::numerical, std::move(message)) {}
};

class EmptySubspaceError : public Error {
 public:
  explicit EmptySubspaceError(std::string message)
      : Error(ErrorKind::empty_subspace, std::move(message)) {}
};

class DegenerateSteeringError : public Error {
 public:
  explicit DegenerateSteeringError(std::string message)
      : Error(ErrorKind::degenerate_steering, std::move(message)) {}
};

class IoError : public Error {
 public:
  explicit IoError(std::string message)
      : Error(ErrorKind::io, std::move(message)) {}
};

}  // namespace msrimg
