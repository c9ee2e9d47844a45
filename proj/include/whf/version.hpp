#pragma once

namespace whf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace whf
