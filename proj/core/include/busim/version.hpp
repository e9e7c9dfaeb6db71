#pragma once

namespace busim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace busim
