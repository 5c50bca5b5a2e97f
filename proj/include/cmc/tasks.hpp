#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/error.hpp"
#include "cmc/model.hpp"
#include "cmc/rng.hpp"
#include "cmc/rounding.hpp"

namespace cmc::tasks {

struct CompressedCode {
  std::string class_label;
  BitVector irrelevant_bits;

  friend bool operator==(const CompressedCode&, const CompressedCode&) = default;
};

// Class of x, read off the model's coordinates: a mismatch on any
// overall-relevant bit means x is outside C — an outlier — otherwise the
// index interval containing xi(x) names the class. nullopt = outlier.
inline std::optional<std::string> classify(const BitVector& x, const model::CompleteModel& m) {
  const std::uint64_t slot = m.slot_of(x);  // UnknownElement if x is not in the universe
  const BitVector pattern = m.index_pattern(slot);
  for (std::size_t i = 0; i < m.n_bits; ++i) {
    const model::CoordinateClass& cc = m.coordinate_classes[i];
    if (cc.tag == model::Tag::OverallRelevant && cc.union_value &&
        (pattern.get(i) ? 1 : 0) != *cc.union_value)
      return std::nullopt;
  }
  const model::ClassBlock* b = m.block_of_slot(slot);
  if (!b || !m.slots[slot]) return std::nullopt;
  return b->label;
}

// Uniform draw from a class: fix the class's leading bits, draw the trailing
// free bits, and redraw whenever the slot holds a dummy (accept-reject).
inline BitVector decode(const model::CompleteModel& m, std::string_view class_label,
                        std::uint64_t seed) {
  const model::ClassBlock& b = m.block(class_label);
  bool any_real = false;
  for (std::uint64_t s = b.start; s < b.start + b.padded_size && !any_real; ++s)
    any_real = m.slots[s].has_value();
  require(any_real, errc::empty_subset, "class " + std::string(class_label) +
                                            " holds no real elements");
  Rng rng(seed);
  for (;;) {
    const std::uint64_t offset = rng.below(b.padded_size);
    if (const auto& e = m.slots[b.start + offset]) return *e;
  }
}

// Inverse image of the whole class interval, dummies filtered out.
inline std::vector<BitVector> enumerate_class(const model::CompleteModel& m,
                                              std::string_view class_label) {
  const model::ClassBlock& b = m.block(class_label);
  std::vector<BitVector> out;
  out.reserve(b.n_real);
  for (std::uint64_t s = b.start; s < b.start + b.padded_size; ++s)
    if (m.slots[s]) out.push_back(*m.slots[s]);
  return out;
}

// Lossless compression: keep only the irrelevant coordinates of xi(x); the
// class's relevant bits are constant and need not be stored.
inline CompressedCode compress(const BitVector& x, const model::CompleteModel& m) {
  const std::optional<std::string> label = classify(x, m);
  require(label.has_value(), errc::outlier_not_compressible,
          "element " + x.to_string() + " is an outlier; nothing deterministic to drop");
  const model::ClassBlock& b = m.block(*label);
  const std::uint64_t offset = m.slot_of(x) - b.start;
  return {*label, BitVector::from_uint(offset, b.irrelevant_bit_count())};
}

inline BitVector decompress(const CompressedCode& code, const model::CompleteModel& m) {
  const model::ClassBlock& b = m.block(code.class_label);
  require(code.irrelevant_bits.size() == b.irrelevant_bit_count(), errc::size_mismatch,
          "code carries " + std::to_string(code.irrelevant_bits.size()) + " bits, class " +
              code.class_label + " has " + std::to_string(b.irrelevant_bit_count()));
  const std::uint64_t slot = b.start + code.irrelevant_bits.to_uint();
  const auto& e = m.slots[slot];
  require(e.has_value(), errc::dummy_code,
          "code addresses a padding slot of class " + code.class_label);
  return *e;
}

// Finite grid of candidate parameter pairs for y = a * e^(b x), with the
// noise model that turns regression into classification: a point pattern is
// assigned to the pair under which its probability is largest, assuming
// isotropic Gaussian noise of width noise_sigma. Ties break by grid order.
struct RegressionGrid {
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> sample_points;
  double noise_sigma = 1.0;
  // y values are quantized to this many significant binary figures before
  // scoring, embedding the points in a finite universe.
  unsigned quant_precision = 16;
  // Optional outlier floor on the best log-likelihood; disabled by default.
  std::optional<double> log_likelihood_floor;
};

inline std::optional<std::pair<double, double>> fit_regression(
    std::span<const std::pair<double, double>> points, const RegressionGrid& grid) {
  require(!points.empty(), errc::empty_input, "no points to fit");
  require(!grid.pairs.empty(), errc::empty_input, "empty parameter grid");
  require(grid.noise_sigma > 0, errc::invalid_argument, "noise_sigma must be positive");
  for (const auto& [x, y] : points) {
    bool known = false;
    for (double s : grid.sample_points)
      if (s == x) {
        known = true;
        break;
      }
    require(known, errc::invalid_argument,
            "point x = " + std::to_string(x) + " is not a grid sample point");
  }

  double best = -std::numeric_limits<double>::infinity();
  std::optional<std::pair<double, double>> winner;
  for (const auto& [a, b] : grid.pairs) {
    double rss = 0.0;
    for (const auto& [x, y] : points) {
      const double yq = significant_binary_round(y, grid.quant_precision);
      const double r = yq - a * std::exp(b * x);
      rss += r * r;
    }
    const double loglik = -rss / (2.0 * grid.noise_sigma * grid.noise_sigma);
    if (loglik > best) {
      best = loglik;
      winner = {a, b};
    }
  }
  if (grid.log_likelihood_floor && best < *grid.log_likelihood_floor) return std::nullopt;
  return winner;
}

}  // namespace cmc::tasks
