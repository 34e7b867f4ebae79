#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotcb {

enum class ErrorKind {
  InvalidInput,
  NumericalFailure,
  ResourceLimit,
  DegenerateCodeword,
  RankDeficient,
  AbortTrial,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the "<kind>: " prefix carried by what().
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace rotcb
