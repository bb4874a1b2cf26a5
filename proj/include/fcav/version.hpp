#pragma once

namespace fcav {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fcav
