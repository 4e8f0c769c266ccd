#pragma once

namespace walkmax {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace walkmax
