#pragma once

namespace procgen {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace procgen
