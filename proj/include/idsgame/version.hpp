#pragma once

namespace idsgame {
inline constexpr const char* kVersion = "0.1.0";
}
