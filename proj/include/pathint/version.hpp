#pragma once

namespace pathint {
inline constexpr const char* kVersion = "0.1.0";
}
