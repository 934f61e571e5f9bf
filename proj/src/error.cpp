#include "grcausal/error.hpp"

namespace grcausal {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::DegenerateTargets: return "degenerate-targets";
    case ErrorCode::DegenerateResiduals: return "degenerate-residuals";
    case ErrorCode::NumericalError: return "numerical-error";
    case ErrorCode::TiesError: return "ties-error";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::ResourceLimit: return "resource-limit";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::IoError: return "io-error";
  }
  return "unknown";
}

}  // namespace grcausal
