#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/error.hpp"
#include "cmc/space.hpp"

namespace cmc::model {

enum class Tag { OverallRelevant, PartiallyRelevant, Irrelevant, Residual };

inline const char* tag_name(Tag t) {
  switch (t) {
    case Tag::OverallRelevant: return "overall_relevant";
    case Tag::PartiallyRelevant: return "partially_relevant";
    case Tag::Irrelevant: return "irrelevant";
    case Tag::Residual: return "residual";
  }
  return "?";
}

struct CoordinateClass {
  Tag tag = Tag::Residual;
  // Deterministic bit value per class label, for the classes where the
  // coordinate is fixed. union_value is set when it is fixed over C as well.
  std::map<std::string, int> class_values;
  std::optional<int> union_value;

  friend bool operator==(const CoordinateClass&, const CoordinateClass&) = default;
};

struct ClassBlock {
  std::string label;
  std::uint64_t start = 0;        // first slot of this class's index interval
  std::uint64_t padded_size = 0;  // 2^{N_a}
  std::uint64_t n_real = 0;       // |C_a|
  std::vector<std::uint64_t> dummy_slots;

  std::size_t irrelevant_bit_count() const {
    return static_cast<std::size_t>(std::bit_width(padded_size) - 1);
  }
  bool contains(std::uint64_t slot) const { return slot >= start && slot < start + padded_size; }
};

// A complete common model: the indexed-list bijection between the (dummy
// extended) universe and N-bit index patterns, plus per-coordinate tags.
//
// Slot layout: class blocks in non-increasing padded size (real elements in
// ascending lexicographic order, then that class's dummies), then union
// padding dummies, then X - C in ascending order, then trailing universe
// dummies. Every block is a power of two long and starts at a multiple of
// its own size, so the leading bits of a block are constant and the trailing
// bits sweep all values.
struct CompleteModel {
  std::size_t element_width = 0;
  std::size_t n_bits = 0;  // index width N; slot count == 2^N
  std::vector<std::optional<BitVector>> slots;
  std::unordered_map<BitVector, std::uint64_t, BitVectorHash> element_slot;
  std::vector<ClassBlock> classes;  // in slot-layout order
  std::uint64_t union_padded_size = 0;
  std::vector<std::uint64_t> union_dummy_slots;
  std::vector<CoordinateClass> coordinate_classes;

  std::uint64_t slot_count() const { return std::uint64_t{1} << n_bits; }

  BitVector index_pattern(std::uint64_t slot) const {
    return BitVector::from_uint(slot, n_bits);
  }

  std::uint64_t slot_of(const BitVector& element) const {
    auto it = element_slot.find(element);
    require(it != element_slot.end(), errc::unknown_element,
            "element " + element.to_string() + " not in the model's universe");
    return it->second;
  }

  BitVector forward(const BitVector& element) const { return index_pattern(slot_of(element)); }

  // Preimage of an index pattern; nullopt when the slot holds a dummy.
  std::optional<BitVector> inverse(const BitVector& pattern) const {
    require(pattern.size() == n_bits, errc::size_mismatch,
            "index pattern width " + std::to_string(pattern.size()) + " != " +
                std::to_string(n_bits));
    return slots[pattern.to_uint()];
  }

  const ClassBlock& block(std::string_view label) const {
    for (const ClassBlock& b : classes)
      if (b.label == label) return b;
    fail(errc::unknown_class, "no class labeled " + std::string(label));
  }

  const ClassBlock* block_of_slot(std::uint64_t slot) const {
    for (const ClassBlock& b : classes)
      if (b.contains(slot)) return &b;
    return nullptr;
  }

  // Index patterns of a block's slots, dummies included.
  std::vector<BitVector> block_patterns(const ClassBlock& b) const {
    std::vector<BitVector> out;
    out.reserve(b.padded_size);
    for (std::uint64_t s = b.start; s < b.start + b.padded_size; ++s)
      out.push_back(index_pattern(s));
    return out;
  }

  std::vector<BitVector> union_patterns() const {
    std::vector<BitVector> out;
    out.reserve(union_padded_size);
    for (std::uint64_t s = 0; s < union_padded_size; ++s) out.push_back(index_pattern(s));
    return out;
  }
};

namespace detail {

inline bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline Tag classify_coordinate(std::size_t i, const CompleteModel& m, CoordinateClass& out) {
  const auto id = space::identity_coordinatization();
  const std::vector<BitVector> union_pats = m.union_patterns();
  const std::optional<int> union_det = space::is_deterministic(i, union_pats, id);

  bool all_uniform_indep = true;
  bool any_det = false;
  bool all_det_or_uniform = true;
  for (const ClassBlock& b : m.classes) {
    const std::vector<BitVector> pats = m.block_patterns(b);
    if (const std::optional<int> v = space::is_deterministic(i, pats, id)) {
      any_det = true;
      all_uniform_indep = false;
      out.class_values[b.label] = *v;
    } else if (space::is_uniform(i, pats, id) && space::is_independent(i, pats, id)) {
      // uniform and independent within this class
    } else {
      all_uniform_indep = false;
      all_det_or_uniform = false;
    }
  }

  if (union_det) {
    out.union_value = union_det;
    return Tag::OverallRelevant;
  }
  if (all_uniform_indep) return Tag::Irrelevant;
  if (any_det && all_det_or_uniform && space::is_uniform(i, union_pats, id) &&
      space::is_independent(i, union_pats, id))
    return Tag::PartiallyRelevant;
  return Tag::Residual;
}

}  // namespace detail

// Indexed-list construction of a common complete model.
//
// With pad=true every class is extended to the next power of two, the union
// to the next power of two above the padded class total, and the universe
// likewise; with pad=false all cardinalities must already be powers of two.
// Equal-cardinality classes are ordered by ascending label; elements inside a
// class by ascending lexicographic value, dummies after the real elements.
inline CompleteModel build_common_complete_model(const space::SubsetFamily& family, bool pad) {
  const space::Universe& universe = family.universe();

  struct Ordered {
    std::string label;
    std::vector<BitVector> elements;  // ascending
  };
  std::vector<Ordered> ordered;
  ordered.reserve(family.classes().size());
  for (const space::LabeledSubset& c : family.classes()) {
    Ordered o{c.label, c.elements};
    std::sort(o.elements.begin(), o.elements.end());
    ordered.push_back(std::move(o));
  }
  std::sort(ordered.begin(), ordered.end(), [](const Ordered& a, const Ordered& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() > b.elements.size();
    if (a.label != b.label) return a.label < b.label;
    return a.elements.front() < b.elements.front();
  });

  std::uint64_t class_total = 0;
  std::uint64_t union_real = 0;
  for (const Ordered& o : ordered) {
    const std::uint64_t n = o.elements.size();
    if (!pad)
      require(detail::is_pow2(n), errc::not_power_of_two,
              "class " + o.label + " has " + std::to_string(n) + " elements (pad disabled)");
    class_total += pad ? std::bit_ceil(n) : n;
    union_real += n;
  }
  if (!pad)
    require(detail::is_pow2(union_real), errc::not_power_of_two,
            "union has " + std::to_string(union_real) + " elements (pad disabled)");
  const std::uint64_t union_padded = pad ? std::bit_ceil(class_total) : class_total;

  std::vector<BitVector> rest;
  {
    std::unordered_set<BitVector, BitVectorHash> in_union;
    for (const Ordered& o : ordered) in_union.insert(o.elements.begin(), o.elements.end());
    for (const BitVector& x : universe.elements())
      if (!in_union.count(x)) rest.push_back(x);
    std::sort(rest.begin(), rest.end());
  }

  const std::uint64_t real_total = union_padded + rest.size();
  if (!pad)
    require(detail::is_pow2(universe.size()), errc::not_power_of_two,
            "universe has " + std::to_string(universe.size()) + " elements (pad disabled)");
  const std::uint64_t total = pad ? std::bit_ceil(real_total) : real_total;
  require(detail::is_pow2(total), errc::not_power_of_two, "internal layout is not a power of two");
  require(total <= (std::uint64_t{1} << 22), errc::too_large_for_exact,
          "extended universe of " + std::to_string(total) + " slots exceeds the explicit limit");

  CompleteModel m;
  m.element_width = universe.n_bits();
  m.n_bits = static_cast<std::size_t>(std::bit_width(total) - 1);
  m.union_padded_size = union_padded;
  m.slots.assign(total, std::nullopt);
  m.element_slot.reserve(universe.size() * 2);

  std::uint64_t cursor = 0;
  for (const Ordered& o : ordered) {
    ClassBlock b;
    b.label = o.label;
    b.start = cursor;
    b.n_real = o.elements.size();
    b.padded_size = pad ? std::bit_ceil(b.n_real) : b.n_real;
    for (const BitVector& e : o.elements) {
      m.slots[cursor] = e;
      m.element_slot.emplace(e, cursor);
      ++cursor;
    }
    for (std::uint64_t s = b.start + b.n_real; s < b.start + b.padded_size; ++s) {
      b.dummy_slots.push_back(s);
      ++cursor;
    }
    m.classes.push_back(std::move(b));
  }
  for (; cursor < union_padded; ++cursor) m.union_dummy_slots.push_back(cursor);
  for (const BitVector& e : rest) {
    m.slots[cursor] = e;
    m.element_slot.emplace(e, cursor);
    ++cursor;
  }
  // remaining slots up to `total` are trailing universe dummies

  m.coordinate_classes.resize(m.n_bits);
  for (std::size_t i = 0; i < m.n_bits; ++i) {
    CoordinateClass cc;
    cc.tag = detail::classify_coordinate(i, m, cc);
    m.coordinate_classes[i] = std::move(cc);
  }
  return m;
}

struct VerificationIssue {
  std::string scope;                       // class label, "C", or "structure"
  std::optional<std::size_t> coordinate;   // absent for structural issues
  std::string what;
};

struct VerificationReport {
  std::size_t checks = 0;
  std::vector<VerificationIssue> issues;

  bool ok() const { return issues.empty(); }
};

// Checks the completeness conditions against a family: per padded class and
// per coordinate, deterministic XOR uniform-and-independent; per padded
// class, the projection onto its non-deterministic coordinates is a bijection
// onto B^{N_a}; and the stored mapping is a bijection slot-for-slot.
inline VerificationReport verify_complete_model(const CompleteModel& m,
                                                const space::SubsetFamily& family) {
  VerificationReport rep;
  const auto id = space::identity_coordinatization();

  auto issue = [&rep](std::string scope, std::optional<std::size_t> coord, std::string what) {
    rep.issues.push_back({std::move(scope), coord, std::move(what)});
  };

  // structure: the two lookup directions must agree, and patterns are unique
  rep.checks++;
  for (const auto& [element, slot] : m.element_slot) {
    if (slot >= m.slots.size() || !m.slots[slot] || !(*m.slots[slot] == element)) {
      issue("structure", std::nullopt, "element_slot and slots disagree");
      break;
    }
  }
  rep.checks++;
  {
    std::size_t real = 0;
    for (std::uint64_t s = 0; s < m.slots.size(); ++s)
      if (m.slots[s]) {
        ++real;
        auto it = m.element_slot.find(*m.slots[s]);
        if (it == m.element_slot.end() || it->second != s) {
          issue("structure", std::nullopt, "slot " + std::to_string(s) + " not inverted");
          break;
        }
      }
    if (real != m.element_slot.size())
      issue("structure", std::nullopt, "duplicate elements across slots");
  }
  rep.checks++;
  for (const BitVector& x : family.universe().elements())
    if (!m.element_slot.count(x)) {
      issue("structure", std::nullopt, "universe element " + x.to_string() + " unmapped");
      break;
    }

  // patterns per padded class: family members plus the block's dummies
  std::vector<std::vector<BitVector>> class_patterns;
  std::vector<std::string> class_labels;
  for (const space::LabeledSubset& c : family.classes()) {
    std::vector<BitVector> pats;
    pats.reserve(c.elements.size());
    for (const BitVector& y : c.elements) pats.push_back(m.forward(y));
    for (const ClassBlock& b : m.classes)
      if (b.label == c.label)
        for (std::uint64_t s : b.dummy_slots) pats.push_back(m.index_pattern(s));
    class_patterns.push_back(std::move(pats));
    class_labels.push_back(c.label);
  }
  std::vector<BitVector> union_pats;
  for (const auto& pats : class_patterns) union_pats.insert(union_pats.end(), pats.begin(), pats.end());
  for (std::uint64_t s : m.union_dummy_slots) union_pats.push_back(m.index_pattern(s));

  const std::size_t width = m.n_bits;
  auto check_scope = [&](const std::string& scope, const std::vector<BitVector>& pats) {
    for (std::size_t i = 0; i < width; ++i) {
      rep.checks++;
      if (space::is_deterministic(i, pats, id)) continue;
      const bool uniform = space::is_uniform(i, pats, id);
      const bool indep = space::is_independent(i, pats, id);
      if (!uniform)
        issue(scope, i, "coordinate is neither deterministic nor uniform");
      else if (!indep)
        issue(scope, i, "coordinate is uniform but not independent");
    }
  };

  for (std::size_t a = 0; a < class_patterns.size(); ++a)
    check_scope(class_labels[a], class_patterns[a]);
  check_scope("C", union_pats);

  // exact-uniformity witness: the free (non-deterministic) coordinates of a
  // padded class sweep B^{N_a} exactly once
  for (std::size_t a = 0; a < class_patterns.size(); ++a) {
    rep.checks++;
    const std::vector<BitVector>& pats = class_patterns[a];
    std::vector<std::size_t> free_bits;
    for (std::size_t i = 0; i < width; ++i)
      if (!space::is_deterministic(i, pats, id)) free_bits.push_back(i);
    bool ok = pats.size() == (std::uint64_t{1} << free_bits.size());
    if (ok) {
      std::unordered_set<BitVector, BitVectorHash> seen;
      for (const BitVector& p : pats)
        if (!seen.insert(p.select(free_bits)).second) {
          ok = false;
          break;
        }
    }
    if (!ok)
      issue(class_labels[a], std::nullopt,
            "projection onto the " + std::to_string(free_bits.size()) +
                " free coordinates is not a bijection onto B^N_a");
  }

  return rep;
}

// Permute a class's irrelevant-bit patterns among themselves. The result is
// another complete model differing only inside that class's index interval.
inline CompleteModel relabel_irrelevant(const CompleteModel& m, std::string_view label,
                                        std::span<const std::uint64_t> permutation) {
  const ClassBlock& b = m.block(label);
  require(permutation.size() == b.padded_size, errc::not_a_bijection,
          "permutation size " + std::to_string(permutation.size()) + " != padded class size " +
              std::to_string(b.padded_size));
  std::vector<bool> seen(permutation.size(), false);
  for (std::uint64_t v : permutation) {
    require(v < permutation.size() && !seen[v], errc::not_a_bijection,
            "permutation is not a bijection on the class's patterns");
    seen[v] = true;
  }

  CompleteModel out = m;
  ClassBlock* nb = nullptr;
  for (ClassBlock& cb : out.classes)
    if (cb.label == label) nb = &cb;
  nb->dummy_slots.clear();
  for (std::uint64_t v = 0; v < b.padded_size; ++v) {
    const std::uint64_t from = b.start + v;
    const std::uint64_t to = b.start + permutation[v];
    out.slots[to] = m.slots[from];
    if (out.slots[to])
      out.element_slot[*out.slots[to]] = to;
    else
      nb->dummy_slots.push_back(to);
  }
  std::sort(nb->dummy_slots.begin(), nb->dummy_slots.end());
  return out;
}

}  // namespace cmc::model
