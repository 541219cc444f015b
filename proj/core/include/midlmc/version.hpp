#pragma once

namespace midlmc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace midlmc
