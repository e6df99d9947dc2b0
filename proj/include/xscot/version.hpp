#pragma once

#include <string_view>

namespace xscot {

inline constexpr std::string_view kToolName = "xscot";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace xscot
