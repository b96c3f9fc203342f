#pragma once

namespace pm25 {

inline constexpr const char* kToolkitName = "pm25kit";
inline constexpr const char* kToolkitVersion = "0.1.0";

} // namespace pm25
