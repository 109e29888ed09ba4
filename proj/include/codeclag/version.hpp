#pragma once

namespace codeclag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace codeclag
