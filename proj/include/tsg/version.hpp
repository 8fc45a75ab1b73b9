#pragma once

namespace tsg {
inline constexpr const char* kVersion = "1.0.0";
}
