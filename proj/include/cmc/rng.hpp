#pragma once

#include <cstdint>
#include <string_view>

namespace cmc {

// splitmix64. Chosen over std::mt19937 + distributions because the whole
// draw pipeline below is specified by this header alone, so seeded output is
// identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next_u64() {
    s_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform in [0, n); rejection on the top range.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool next_bit() { return next_u64() >> 63; }

 private:
  std::uint64_t s_;
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based seed split: child streams are keyed by (seed, site, counter),
// so adding a new draw site never perturbs existing streams.
inline std::uint64_t split_seed(std::uint64_t seed, std::string_view site,
                                std::uint64_t counter = 0) {
  Rng r(seed ^ fnv1a(site));
  const std::uint64_t a = r.next_u64();
  Rng c(a ^ counter);
  return c.next_u64();
}

}  // namespace cmc
