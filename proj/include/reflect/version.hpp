#pragma once

namespace reflect {

inline constexpr const char* version = "0.1.0";

}
