#pragma once

#include <string_view>

namespace rfidnet {

inline constexpr std::string_view kToolVersion = "0.3.0";

}  // namespace rfidnet
