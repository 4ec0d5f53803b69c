#pragma once

namespace mixreg {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace mixreg
