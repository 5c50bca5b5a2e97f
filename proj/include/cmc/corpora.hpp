#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/error.hpp"
#include "cmc/rng.hpp"

namespace cmc::corpora {

// 2D Ising-style spec on an L x L binary grid, open boundary. The energy
// weighs the count of unequal 4-neighbor pairs and the count of ones:
//   H(image) = j_pair * #unequal_pairs + h_field * #ones
// and configurations are weighted by exp(-beta * H).
struct IsingSpec {
  std::size_t side = 2;
  double beta = 0.0;
  double j_pair = 1.0;
  double h_field = 0.0;

  void check() const {
    require(side >= 1, errc::invalid_argument, "lattice side must be >= 1");
    require(std::isfinite(beta) && std::isfinite(j_pair) && std::isfinite(h_field),
            errc::invalid_argument, "couplings must be finite");
    require(beta >= 0, errc::invalid_argument, "beta must be >= 0");
  }
};

inline std::size_t unequal_pair_count(const BitVector& image, std::size_t side) {
  require(image.size() == side * side, errc::size_mismatch,
          "image length " + std::to_string(image.size()) + " != side^2");
  std::size_t unequal = 0;
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < side; ++x) {
      const bool v = image.get(y * side + x);
      if (x + 1 < side && v != image.get(y * side + x + 1)) ++unequal;
      if (y + 1 < side && v != image.get((y + 1) * side + x)) ++unequal;
    }
  return unequal;
}

// Computed from the two integer counts, so images with equal counts get a
// bit-identical energy.
inline double ising_energy(const BitVector& image, const IsingSpec& spec) {
  spec.check();
  const std::size_t unequal = unequal_pair_count(image, spec.side);
  return spec.j_pair * static_cast<double>(unequal) +
         spec.h_field * static_cast<double>(image.count_ones());
}

// Exact Boltzmann distribution over all 2^(L^2) images, indexed by the
// MSB-first integer encoding of the image bits.
struct ExactDistribution {
  IsingSpec spec;
  std::vector<double> probability;

  double prob_of(const BitVector& image) const {
    require(image.size() == spec.side * spec.side, errc::size_mismatch, "image size mismatch");
    return probability[image.to_uint()];
  }
};

inline ExactDistribution ising_exact_distribution(const IsingSpec& spec) {
  spec.check();
  const std::size_t n = spec.side * spec.side;
  require(n <= 16, errc::too_large_for_exact, "exact enumeration limited to 16 pixels");
  ExactDistribution d;
  d.spec = spec;
  const std::size_t states = std::size_t{1} << n;
  d.probability.resize(states);
  double z = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    const double w = std::exp(-spec.beta * ising_energy(BitVector::from_uint(s, n), spec));
    d.probability[s] = w;
    z += w;
  }
  for (double& p : d.probability) p /= z;
  return d;
}

// Single-site Metropolis from an all-zeros start: sweeps visit sites in
// row-major order. Each visit proposes a uniform random value for the site
// and accepts the change with probability min(1, e^(-beta dH)); the uniform
// proposal keeps the chain aperiodic (an unconditional flip proposal would
// toggle deterministically at beta = 0). Two draws per visit, always taken,
// keep the stream aligned with the seed.
inline BitVector ising_sample(const IsingSpec& spec, std::uint64_t seed, std::size_t sweeps) {
  spec.check();
  require(sweeps >= 1, errc::invalid_argument, "sweeps must be >= 1");
  const std::size_t side = spec.side;
  const std::size_t n = side * side;
  std::vector<std::uint8_t> cell(n, 0);
  Rng rng(seed);

  auto delta_energy = [&](std::size_t y, std::size_t x) {
    const std::size_t i = y * side + x;
    const int old_v = cell[i];
    const int new_v = 1 - old_v;
    int d_unequal = 0;
    auto visit = [&](std::size_t j) {
      const int nb = cell[j];
      d_unequal += (new_v != nb) - (old_v != nb);
    };
    if (x > 0) visit(i - 1);
    if (x + 1 < side) visit(i + 1);
    if (y > 0) visit(i - side);
    if (y + 1 < side) visit(i + side);
    return spec.j_pair * d_unequal + spec.h_field * (new_v - old_v);
  };

  for (std::size_t sweep = 0; sweep < sweeps; ++sweep)
    for (std::size_t y = 0; y < side; ++y)
      for (std::size_t x = 0; x < side; ++x) {
        const bool proposal = rng.next_bit();
        const double u = rng.next_unit();
        if (proposal == static_cast<bool>(cell[y * side + x])) continue;  // no-op proposal
        const double dh = delta_energy(y, x);
        if (u < std::exp(-spec.beta * dh)) cell[y * side + x] ^= 1;
      }

  BitVector out(n);
  for (std::size_t i = 0; i < n; ++i) out.set(i, cell[i]);
  return out;
}

// Axis-aligned rectangle with inclusive extents and a color of color_depth
// bits. Later shapes overdraw earlier ones.
struct Rect {
  std::size_t x_lo = 0, x_hi = 0;
  std::size_t y_lo = 0, y_hi = 0;
  std::uint32_t color = 1;
};

struct GeomSpec {
  std::size_t side = 1;
  unsigned color_depth = 1;
  std::vector<Rect> shapes;
  bool background_ones = false;

  static GeomSpec single_square(std::size_t side, std::size_t x, std::size_t y, std::size_t edge,
                                std::uint32_t color = 1, unsigned color_depth = 1) {
    require(edge >= 1, errc::extent_out_of_range, "square edge must be >= 1");
    GeomSpec g;
    g.side = side;
    g.color_depth = color_depth;
    g.shapes = {Rect{x, x + edge - 1, y, y + edge - 1, color}};
    return g;
  }

  void check() const {
    require(side >= 1, errc::invalid_argument, "side must be >= 1");
    require(color_depth >= 1 && color_depth <= 32, errc::invalid_argument,
            "color depth must be in [1, 32]");
    for (const Rect& r : shapes) {
      require(r.x_lo <= r.x_hi && r.x_hi < side && r.y_lo <= r.y_hi && r.y_hi < side,
              errc::extent_out_of_range, "rectangle extents must lie within [0, side)");
    }
  }
};

// Pixel (y, x) occupies bits [(y*side + x) * depth, ... + depth), MSB first.
inline BitVector render_geometry(const GeomSpec& spec) {
  spec.check();
  const std::size_t n = spec.side * spec.side;
  std::vector<std::uint32_t> pixel(n, 0);
  const std::uint32_t mask =
      spec.color_depth >= 32 ? ~0u : ((std::uint32_t{1} << spec.color_depth) - 1);
  if (spec.background_ones)
    for (std::uint32_t& p : pixel) p = mask;
  for (const Rect& r : spec.shapes)
    for (std::size_t y = r.y_lo; y <= r.y_hi; ++y)
      for (std::size_t x = r.x_lo; x <= r.x_hi; ++x) pixel[y * spec.side + x] = r.color & mask;

  BitVector out(n * spec.color_depth);
  for (std::size_t i = 0; i < n; ++i)
    for (unsigned b = 0; b < spec.color_depth; ++b)
      out.set(i * spec.color_depth + b, (pixel[i] >> (spec.color_depth - 1 - b)) & 1u);
  return out;
}

inline unsigned ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0 : static_cast<unsigned>(std::bit_width(v - 1));
}

// Bits needed to name a single axis-aligned square on an L x L canvas with
// the naive per-field encoding: top-left x, top-left y and edge length, each
// one coordinate of ceil(log2 L) bits. The naive fields can also describe
// squares overflowing the canvas; square_corpus_placements counts only the
// valid ones, giving the exact bound ceil(log2 placements).
inline std::uint64_t square_corpus_bits(std::size_t side) {
  require(side >= 2, errc::invalid_argument, "side must be >= 2");
  return 3ull * ceil_log2(side);
}

// Number of squares that fit entirely on the canvas: sum over edge lengths
// e = 1..L of (L - e + 1)^2, i.e. L(L+1)(2L+1)/6.
inline std::uint64_t square_corpus_placements(std::size_t side) {
  require(side >= 2, errc::invalid_argument, "side must be >= 2");
  const std::uint64_t n = side;
  return n * (n + 1) * (2 * n + 1) / 6;
}

struct RectBitCounts {
  std::uint64_t irrelevant = 0;
  std::uint64_t total = 0;
  std::uint64_t relevant = 0;
};

// Free-coordinate count of an n-rectangle color corpus. Each axis extent is
// one of C(L,2) = L(L-1)/2 index pairs, so a rectangle costs
// 2*log2(C(L,2)) + color_depth bits; the total over all rectangles is
// rounded up once.
inline RectBitCounts rect_corpus_bits(std::size_t side, std::size_t n_rects,
                                      unsigned color_depth) {
  require(side >= 2, errc::invalid_argument, "side must be >= 2");
  require(n_rects >= 1, errc::invalid_argument, "n_rects must be >= 1");
  const double pairs = static_cast<double>(side) * (static_cast<double>(side) - 1.0) / 2.0;
  const double per_rect = 2.0 * std::log2(pairs) + static_cast<double>(color_depth);
  RectBitCounts c;
  c.irrelevant = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n_rects) * per_rect));
  c.total = static_cast<std::uint64_t>(side) * side * color_depth;
  c.relevant = c.total > c.irrelevant ? c.total - c.irrelevant : 0;
  return c;
}

}  // namespace cmc::corpora
