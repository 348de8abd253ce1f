#pragma once

namespace stabtune {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kLibraryName = "stabtune";

}  // namespace stabtune
