#pragma once

#include <stdexcept>
#include <string>

namespace grcausal {

enum class ErrorCode {
  InvalidArgument,
  InsufficientData,
  DegenerateInput,
  DegenerateTargets,
  DegenerateResiduals,
  NumericalError,
  TiesError,
  DomainError,
  ResourceLimit,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; the C API maps the
// code onto its integer status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace grcausal
