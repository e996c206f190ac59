#pragma once

namespace cubedec {

inline constexpr const char* kLibraryName = "cubedec";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace cubedec
