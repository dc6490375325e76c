#pragma once

namespace capra {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace capra
