#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/error.hpp"
#include "cmc/rational.hpp"

namespace cmc::space {

// A coordinatization maps universe elements to their coordinate bit strings.
// It must be injective on the set it is applied to; ops below only evaluate it.
using Coordinatization = std::function<BitVector(const BitVector&)>;

inline Coordinatization identity_coordinatization() {
  return [](const BitVector& x) { return x; };
}

// Finite universe X of fixed-width bit strings. May be all of B^n or a strict
// subset; duplicates are rejected.
class Universe {
 public:
  static Universe of(std::size_t n_bits, std::vector<BitVector> elements) {
    require(!elements.empty(), errc::empty_input, "universe must contain at least one element");
    Universe u;
    u.n_bits_ = n_bits;
    u.index_.reserve(elements.size() * 2);
    for (const BitVector& e : elements) {
      require(e.size() == n_bits, errc::size_mismatch,
              "universe element width " + std::to_string(e.size()) + " != declared " +
                  std::to_string(n_bits));
      require(u.index_.insert(e).second, errc::invalid_argument,
              "duplicate universe element " + e.to_string());
    }
    u.elements_ = std::move(elements);
    return u;
  }

  // All of B^n. Guarded: this materializes 2^n elements.
  static Universe full(std::size_t n_bits) {
    require(n_bits >= 1 && n_bits <= 24, errc::too_large_for_exact,
            "full universe limited to 24 bits");
    std::vector<BitVector> all;
    all.reserve(std::size_t{1} << n_bits);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n_bits); ++v)
      all.push_back(BitVector::from_uint(v, n_bits));
    return of(n_bits, std::move(all));
  }

  std::size_t n_bits() const { return n_bits_; }
  const std::vector<BitVector>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const BitVector& x) const { return index_.count(x) != 0; }

 private:
  std::size_t n_bits_ = 0;
  std::vector<BitVector> elements_;
  std::unordered_set<BitVector, BitVectorHash> index_;
};

struct LabeledSubset {
  std::string label;
  std::vector<BitVector> elements;
};

// Pairwise-disjoint labeled subsets C_a of a universe, plus their union C.
class SubsetFamily {
 public:
  static SubsetFamily create(Universe universe, std::vector<LabeledSubset> classes) {
    require(!classes.empty(), errc::empty_input, "family needs at least one class");
    SubsetFamily f;
    std::unordered_set<BitVector, BitVectorHash> seen;
    std::unordered_set<std::string> labels;
    for (const LabeledSubset& c : classes) {
      require(!c.label.empty() && c.label.find_first_of(" \t\n\r") == std::string::npos,
              errc::invalid_argument, "class label must be nonempty without whitespace");
      require(labels.insert(c.label).second, errc::invalid_argument,
              "duplicate class label " + c.label);
      require(!c.elements.empty(), errc::empty_subset, "class " + c.label + " is empty");
      for (const BitVector& e : c.elements) {
        require(universe.contains(e), errc::unknown_element,
                "class " + c.label + " element " + e.to_string() + " not in universe");
        require(seen.insert(e).second, errc::overlapping_classes,
                "element " + e.to_string() + " appears in more than one class");
        f.union_.push_back(e);
      }
    }
    f.universe_ = std::move(universe);
    f.classes_ = std::move(classes);
    return f;
  }

  const Universe& universe() const { return universe_; }
  const std::vector<LabeledSubset>& classes() const { return classes_; }
  const std::vector<BitVector>& union_elements() const { return union_; }

  const LabeledSubset& at(std::string_view label) const {
    for (const LabeledSubset& c : classes_)
      if (c.label == label) return c;
    fail(errc::unknown_class, "no class labeled " + std::string(label));
  }

 private:
  Universe universe_;
  std::vector<LabeledSubset> classes_;
  std::vector<BitVector> union_;  // concatenation in class order
};

// Sparse conditional distribution p_I^(C): only occurring patterns are kept,
// each with its raw count over the conditioning subset.
struct DistributionTable {
  std::vector<std::size_t> indices;
  std::map<BitVector, std::uint64_t> counts;
  std::uint64_t denominator = 0;

  Rational probability(const BitVector& pattern) const {
    auto it = counts.find(pattern);
    if (it == counts.end()) return Rational(0);
    return Rational::of_counts(it->second, denominator);
  }

  Rational total() const {
    std::uint64_t n = 0;
    for (const auto& [pattern, k] : counts) n += k;
    return Rational::of_counts(n, denominator);
  }
};

namespace detail {

inline void check_indices(std::span<const std::size_t> indices, std::size_t width) {
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : indices) {
    require(i < width, errc::index_out_of_range,
            "coordinate index " + std::to_string(i) + " out of range for width " +
                std::to_string(width));
    require(seen.insert(i).second, errc::index_out_of_range,
            "repeated coordinate index " + std::to_string(i));
  }
}

}  // namespace detail

// Joint distribution of the coordinates `indices` over `subset`:
// p(sigma) = #{y in C : xi_i(y) = sigma_i for all i in I} / |C|.
inline DistributionTable joint_distribution(std::span<const BitVector> subset,
                                            std::span<const std::size_t> indices,
                                            const Coordinatization& xi) {
  require(!subset.empty(), errc::empty_subset, "joint_distribution over empty subset");
  DistributionTable t;
  t.indices.assign(indices.begin(), indices.end());
  t.denominator = subset.size();
  bool checked = false;
  for (const BitVector& y : subset) {
    const BitVector sigma = xi(y);
    if (!checked) {
      detail::check_indices(indices, sigma.size());
      checked = true;
    }
    ++t.counts[sigma.select(indices)];
  }
  return t;
}

// E(Q | C) = (sum_{y in C} Q(y)) / |C|, exact.
inline Rational expectation(const std::function<Rational(const BitVector&)>& q,
                            std::span<const BitVector> subset) {
  require(!subset.empty(), errc::empty_subset, "expectation over empty subset");
  Rational sum(0);
  for (const BitVector& y : subset) sum += q(y);
  return sum / Rational::of_counts(subset.size(), 1);
}

// a-point correlation function E(xi_{i1} ... xi_{ia} | C). For bits the
// product is 1 exactly when every selected coordinate is 1.
inline Rational correlation(std::span<const std::size_t> indices,
                            std::span<const BitVector> subset, const Coordinatization& xi) {
  require(!subset.empty(), errc::empty_subset, "correlation over empty subset");
  std::uint64_t hits = 0;
  bool checked = false;
  for (const BitVector& y : subset) {
    const BitVector sigma = xi(y);
    if (!checked) {
      detail::check_indices(indices, sigma.size());
      checked = true;
    }
    bool all_one = true;
    for (std::size_t i : indices)
      if (!sigma.get(i)) {
        all_one = false;
        break;
      }
    if (all_one) ++hits;
  }
  return Rational::of_counts(hits, subset.size());
}

// Fixed value of coordinate i over the subset, or nullopt if it varies.
inline std::optional<int> is_deterministic(std::size_t i, std::span<const BitVector> subset,
                                           const Coordinatization& xi) {
  require(!subset.empty(), errc::empty_subset, "is_deterministic over empty subset");
  std::optional<int> v;
  for (const BitVector& y : subset) {
    const int b = xi(y).get(i) ? 1 : 0;
    if (!v)
      v = b;
    else if (*v != b)
      return std::nullopt;
  }
  return v;
}

// p_i^(C)(0) == p_i^(C)(1) == 1/2 exactly.
inline bool is_uniform(std::size_t i, std::span<const BitVector> subset,
                       const Coordinatization& xi) {
  require(!subset.empty(), errc::empty_subset, "is_uniform over empty subset");
  std::uint64_t ones = 0;
  for (const BitVector& y : subset)
    if (xi(y).get(i)) ++ones;
  return 2 * ones == subset.size();
}

// Coordinate i is independent iff the full joint factorizes:
//   p(sigma) = p_i(sigma_i) * p_rest(sigma_rest)  for every occurring sigma.
// With counts k over |C| this is k(sigma) * |C| == k_i(sigma_i) * k_rest.
// Checking occurring patterns suffices: both sides sum to 1, so agreement on
// the support forces the complement to zero as well.
inline bool is_independent(std::size_t i, std::span<const BitVector> subset,
                           const Coordinatization& xi) {
  require(!subset.empty(), errc::empty_subset, "is_independent over empty subset");
  std::unordered_map<BitVector, std::uint64_t, BitVectorHash> full, rest;
  std::uint64_t ones = 0;
  for (const BitVector& y : subset) {
    const BitVector sigma = xi(y);
    require(i < sigma.size(), errc::index_out_of_range,
            "coordinate index " + std::to_string(i) + " out of range");
    if (sigma.get(i)) ++ones;
    ++full[sigma];
    ++rest[sigma.with_cleared(i)];
  }
  const std::uint64_t n = subset.size();
  const std::uint64_t k_i[2] = {n - ones, ones};
  for (const auto& [sigma, k] : full) {
    const std::uint64_t marginal = k_i[sigma.get(i) ? 1 : 0];
    if (k * n != marginal * rest.at(sigma.with_cleared(i))) return false;
  }
  return true;
}

// x = sum_i sigma_i / 2^(i+1), strictly monotone in lexicographic order.
inline double bits_to_unit_interval(const BitVector& bits) {
  require(!bits.empty(), errc::empty_bit_sequence, "bits_to_unit_interval of empty sequence");
  double acc = 0.0;
  for (std::size_t i = bits.size(); i-- > 0;) acc = (acc + (bits.get(i) ? 1.0 : 0.0)) / 2.0;
  return acc;
}

}  // namespace cmc::space
