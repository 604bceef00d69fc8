#pragma once

namespace locoh {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace locoh
