#include "mixreg/error.hpp"

#include <cmath>

#include "mixreg/table.hpp"

namespace mixreg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parameter: return "parameter error";
    case ErrorCode::impossible_observation: return "impossible observation";
    case ErrorCode::impossible_evidence: return "impossible evidence";
    case ErrorCode::size: return "size error";
    case ErrorCode::precondition: return "precondition error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& message, std::optional<std::size_t> position) {
  throw Error(code, message, position);
}

void require_in_closed(double value, double lo, double hi, const char* name) {
  if (!(value >= lo && value <= hi)) {
    fail(ErrorCode::parameter, std::string(name) + " = " + format_double(value) +
                                   " outside [" + format_double(lo) + ", " +
                                   format_double(hi) + "]");
  }
}

void require_in_open(double value, double lo, double hi, const char* name) {
  if (!(value > lo && value < hi)) {
    fail(ErrorCode::parameter, std::string(name) + " = " + format_double(value) +
                                   " outside (" + format_double(lo) + ", " +
                                   format_double(hi) + ")");
  }
}

}  // namespace mixreg
