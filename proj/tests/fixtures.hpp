#pragma once

#include <string>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/model.hpp"
#include "cmc/rng.hpp"
#include "cmc/space.hpp"

namespace fixtures {

inline cmc::BitVector bv(const std::string& s) { return cmc::BitVector::from_string(s); }

inline std::vector<cmc::BitVector> bvs(const std::vector<std::string>& strings) {
  std::vector<cmc::BitVector> out;
  out.reserve(strings.size());
  for (const std::string& s : strings) out.push_back(bv(s));
  return out;
}

// The three-bit worked set: C = {001, 010, 100, 111} inside B^3.
inline std::vector<cmc::BitVector> three_bit_subset() {
  return bvs({"001", "010", "100", "111"});
}

// The four-bit worked family: C1 = {0010, 0101, 1000, 1100}, C2 = {0110, 1111},
// C3 = {0111, 1001} inside B^4.
inline cmc::space::SubsetFamily four_bit_family() {
  return cmc::space::SubsetFamily::create(
      cmc::space::Universe::full(4),
      {{"C1", bvs({"0010", "0101", "1000", "1100"})},
       {"C2", bvs({"0110", "1111"})},
       {"C3", bvs({"0111", "1001"})}});
}

inline cmc::model::CompleteModel four_bit_model(bool pad = false) {
  return cmc::model::build_common_complete_model(four_bit_family(), pad);
}

// Random family of pairwise-disjoint classes inside a random universe of
// width <= max_width bits; elements not assigned to any class stay in X - C.
inline cmc::space::SubsetFamily random_family(cmc::Rng& rng, std::size_t max_width,
                                              std::size_t max_classes) {
  using cmc::BitVector;
  const std::size_t width = 1 + rng.below(max_width);
  const std::uint64_t space_size = std::uint64_t{1} << width;
  std::vector<BitVector> universe_elements;
  for (std::uint64_t v = 0; v < space_size; ++v)
    if (rng.below(4) != 0) universe_elements.push_back(BitVector::from_uint(v, width));
  if (universe_elements.empty())
    universe_elements.push_back(BitVector::from_uint(rng.below(space_size), width));
  cmc::space::Universe u = cmc::space::Universe::of(width, universe_elements);

  const std::size_t n_classes = 1 + rng.below(max_classes);
  std::vector<cmc::space::LabeledSubset> classes(n_classes);
  for (std::size_t a = 0; a < n_classes; ++a) classes[a].label = "K" + std::to_string(a);
  for (const BitVector& e : u.elements()) {
    const std::uint64_t pick = rng.below(n_classes + 1);
    if (pick < n_classes) classes[pick].elements.push_back(e);
  }
  std::vector<cmc::space::LabeledSubset> nonempty;
  for (auto& c : classes)
    if (!c.elements.empty()) nonempty.push_back(std::move(c));
  if (nonempty.empty()) nonempty.push_back({"K0", {u.elements().front()}});
  return cmc::space::SubsetFamily::create(std::move(u), std::move(nonempty));
}

}  // namespace fixtures
