#pragma once

namespace tsera {
inline constexpr const char* kVersion = "0.1.0";
}
