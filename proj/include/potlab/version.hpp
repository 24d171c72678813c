#pragma once

namespace potlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace potlab
