#pragma once

namespace halfline {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace halfline
