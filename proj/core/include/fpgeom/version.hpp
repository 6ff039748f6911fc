#pragma once

namespace fpgeom {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace fpgeom
