#pragma once

namespace minty {

inline constexpr const char* version = "0.1.0";

} // namespace minty
