#pragma once

namespace landscape {

inline constexpr const char* kToolName = "landscape";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace landscape
