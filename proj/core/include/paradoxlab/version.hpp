#pragma once

namespace paradoxlab {

inline constexpr const char* kToolName = "paradoxlab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace paradoxlab
