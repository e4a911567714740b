#pragma once

namespace ldarlct {

inline constexpr const char *kVersion = "0.1.0";

} // namespace ldarlct
