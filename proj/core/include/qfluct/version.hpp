#pragma once

namespace qfluct {
inline constexpr const char* kVersion = "0.1.0";
}
