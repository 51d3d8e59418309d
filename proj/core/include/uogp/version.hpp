#pragma once

namespace uogp {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace uogp
