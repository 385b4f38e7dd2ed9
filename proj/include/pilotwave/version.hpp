#pragma once

namespace pilotwave {

inline constexpr const char* kToolName = "pilotwave";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pilotwave
