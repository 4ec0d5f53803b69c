#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mixreg {

enum class ErrorCode {
  parameter,
  impossible_observation,  // zero total likelihood for a token
  impossible_evidence,     // zero total likelihood for a grounding signal
  size,
  precondition,
  parse,
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const noexcept { return code_; }

  /// Token position (1-based) the error refers to, when there is one.
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message,
                       std::optional<std::size_t> position = std::nullopt);

/// Throws ErrorCode::parameter unless lo <= value <= hi (NaN always fails).
void require_in_closed(double value, double lo, double hi, const char* name);

/// Throws ErrorCode::parameter unless lo < value < hi.
void require_in_open(double value, double lo, double hi, const char* name);

}  // namespace mixreg
