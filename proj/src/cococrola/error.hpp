#pragma once

#include <stdexcept>
#include <string>

namespace cococrola {

// Coarse error classes. The C API maps these onto status codes and the CLI
// maps those onto exit codes (config -> 2, everything else -> 3).
enum class ErrorKind {
  invalid_argument,
  config,
  io,
  format,
  pipeline,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the embedding reader/writer. Carries a reason tag so callers can
// distinguish bad magic from truncation without parsing messages.
class FormatError : public Error {
 public:
  enum class Reason { bad_magic, truncated, size_mismatch, norm_violation, key_mismatch, bad_sidecar, invalid_set };

  FormatError(Reason reason, const std::string& what)
      : Error(ErrorKind::format, what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace cococrola
