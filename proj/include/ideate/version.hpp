#pragma once

namespace ideate {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ideate
