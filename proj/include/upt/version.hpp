#pragma once

namespace upt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace upt
