#include "rotcb/error.hpp"

namespace rotcb {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::DegenerateCodeword: return "DegenerateCodeword";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::AbortTrial: return "AbortTrial";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace rotcb
