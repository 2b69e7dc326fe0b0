#pragma once

namespace hicrit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hicrit
