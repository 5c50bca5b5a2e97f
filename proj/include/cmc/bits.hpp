#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/error.hpp"

namespace cmc {

// Fixed-length bit string. Bit 0 is the leftmost (most significant) position,
// so BitVector::from_string("0010") has exactly bit 2 set. Words pack bits
// MSB-first, which makes lexicographic order equal to unsigned word order.
class BitVector {
 public:
  BitVector() = default;

  explicit BitVector(std::size_t n_bits) : n_(n_bits), w_(word_count(n_bits), 0) {}

  static BitVector from_string(std::string_view s) {
    BitVector b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        b.set(i, true);
      } else if (s[i] != '0') {
        fail(errc::format_error, "bit string may contain only '0'/'1', got '" +
                                     std::string(1, s[i]) + "'");
      }
    }
    return b;
  }

  // MSB-first encoding of the low n_bits of value.
  static BitVector from_uint(std::uint64_t value, std::size_t n_bits) {
    require(n_bits <= 64, errc::invalid_argument, "from_uint limited to 64 bits");
    BitVector b(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i)
      b.set(i, (value >> (n_bits - 1 - i)) & 1u);
    return b;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const {
    check_index(i);
    return (w_[i >> 6] >> (63 - (i & 63))) & 1u;
  }

  void set(std::size_t i, bool v) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
    if (v)
      w_[i >> 6] |= mask;
    else
      w_[i >> 6] &= ~mask;
  }

  std::uint64_t to_uint() const {
    require(n_ <= 64, errc::invalid_argument, "to_uint limited to 64 bits");
    if (n_ == 0) return 0;
    return w_[0] >> (64 - n_);
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (std::uint64_t w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  // Gather the bits at the given positions, in the given order.
  BitVector select(std::span<const std::size_t> positions) const {
    BitVector out(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) out.set(j, get(positions[j]));
    return out;
  }

  // Copy of *this with bit i forced to zero; used as a marginal key.
  BitVector with_cleared(std::size_t i) const {
    BitVector out = *this;
    out.set(i, false);
    return out;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator!=(const BitVector& a, const BitVector& b) { return !(a == b); }

  // Lexicographic over the bit string; shorter strings sort before their
  // extensions. Tail bits past size() are kept zero, so word compare works.
  friend bool operator<(const BitVector& a, const BitVector& b) {
    const std::size_t nw = a.w_.size() < b.w_.size() ? a.w_.size() : b.w_.size();
    for (std::size_t k = 0; k < nw; ++k)
      if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k];
    return a.n_ < b.n_;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n_;
    for (std::uint64_t w : w_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
      h ^= h >> 33;
    }
    return h;
  }

 private:
  static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

  void check_index(std::size_t i) const {
    require(i < n_, errc::index_out_of_range,
            "bit index " + std::to_string(i) + " out of range for length " + std::to_string(n_));
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& b) const { return static_cast<std::size_t>(b.hash()); }
};

}  // namespace cmc
