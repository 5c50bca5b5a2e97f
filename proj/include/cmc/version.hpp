#pragma once

namespace cmc {

inline constexpr const char* kToolName = "cmc";
inline constexpr const char* kVersion = "0.1.0";

// Default seed for every verb that draws randomness. Fixed so that untouched
// runs are reproducible byte for byte.
inline constexpr unsigned long long kDefaultSeed = 0x5eedba5eULL;

}  // namespace cmc
