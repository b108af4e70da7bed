#pragma once

#include <stdexcept>
#include <string>

namespace tempus {

enum class ErrorKind {
  Validation,       // bad input data or configuration
  MissingArtifact,  // a stage prerequisite is absent from the workspace
  Backend,          // inference backend failed or returned invalid data
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Backend errors worth retrying (connection refused, timeouts, 5xx).
class TransientBackendError : public Error {
 public:
  explicit TransientBackendError(const std::string& what)
      : Error(ErrorKind::Backend, what) {}
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace tempus
