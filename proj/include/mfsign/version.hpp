#pragma once

namespace mfsign {

inline constexpr const char* version_string = "mfsign 0.1.0";

} // namespace mfsign
