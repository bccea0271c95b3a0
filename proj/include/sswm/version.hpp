#pragma once

namespace sswm {

inline constexpr const char* version = "1.0.0";

}
