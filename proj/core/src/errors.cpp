#include "msrimg/errors.hpp"

namespace msrimg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::convergence: return "convergence error";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::numerical: return "numerical error";
    case ErrorKind::empty_subspace: return "empty-subspace error";
    case ErrorKind::degenerate_steering: return "degenerate-steering error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

Error::Error(ErrorKind kind, std::string message)
    : kind_(kind), message_(std::move(message)) {}

void Error::add_context(const std::string& context) {
  message_ = context + ": " + message_;
}

}  // namespace msrimg
