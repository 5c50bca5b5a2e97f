#pragma once

#include <cmath>

namespace cmc {

// Truncation to p significant binary figures: v = +-m * 2^e with m in [1, 2)
// keeps the leading p mantissa bits, toward zero. p = 0 collapses every value
// to 0 (the zero-precision measurement has a single outcome). Zero maps to
// itself and negative values keep their sign.
inline double significant_binary_round(double v, unsigned p) {
  if (p == 0 || v == 0.0) return 0.0;
  int e = 0;
  const double f = std::frexp(std::abs(v), &e);  // f in [0.5, 1)
  const double scaled = std::floor(std::ldexp(f, static_cast<int>(p)));
  return std::copysign(std::ldexp(scaled, e - static_cast<int>(p)), v);
}

}  // namespace cmc
