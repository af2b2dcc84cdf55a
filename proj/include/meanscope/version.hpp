#pragma once

namespace meanscope {

inline constexpr const char* kVersion = "0.1.0";

// Stable within one binary; identifies the build in report environments.
inline constexpr const char* kBuildStamp = __DATE__ " " __TIME__;

}  // namespace meanscope
