#pragma once

namespace neundiff {

inline constexpr const char* kVersion = "0.1.0";

} // namespace neundiff
