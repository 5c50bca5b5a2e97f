#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/error.hpp"
#include "cmc/model.hpp"
#include "cmc/rng.hpp"
#include "cmc/rounding.hpp"
#include "cmc/space.hpp"
#include "cmc/tasks.hpp"

namespace cmc::relevance {

// A real-valued measurement together with the precision ladder it is swept
// over; precision = number of significant binary figures retained.
struct Measurement {
  std::string name;
  std::function<double(const BitVector&)> eval;
  std::vector<unsigned> precision_levels;  // strictly decreasing

  void check() const {
    require(static_cast<bool>(eval), errc::invalid_argument, "measurement has no eval");
    require(!precision_levels.empty(), errc::empty_input, "measurement has no precision levels");
    for (std::size_t i = 1; i < precision_levels.size(); ++i)
      require(precision_levels[i] < precision_levels[i - 1], errc::invalid_argument,
              "precision levels must be strictly decreasing");
  }
};

namespace detail {

inline std::string value_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);  // exact, canonical per value
  return buf;
}

}  // namespace detail

// Partition of the universe by the measurement rounded to p significant
// binary figures. At p = 0 everything collapses into one class.
inline space::SubsetFamily coarsen(const Measurement& m, unsigned p, const space::Universe& u) {
  m.check();
  std::map<double, std::vector<BitVector>> groups;
  for (const BitVector& x : u.elements()) {
    const double value = m.eval(x);
    require(std::isfinite(value), errc::invalid_argument,
            m.name + " is not finite on " + x.to_string());
    groups[significant_binary_round(value, p)].push_back(x);
  }
  std::vector<space::LabeledSubset> classes;
  classes.reserve(groups.size());
  for (auto& [value, elements] : groups)
    classes.push_back({p == 0 ? "all" : detail::value_label(value), std::move(elements)});
  return space::SubsetFamily::create(u, std::move(classes));
}

// Per-coordinate relevance across the precision ladder. A coordinate is
// Irrelevant at level p when it is uniform and independent inside every class
// of coarsen(M, p). The threshold is the maximum level that is still not
// Irrelevant (0 when the coordinate is Irrelevant everywhere); the full tag
// vector is kept because relevance need not be monotone in p.
struct RelevanceProfile {
  std::string measurement_name;
  std::string coordinatization_name;  // which xi the sweep used
  std::vector<unsigned> levels;       // descending, as swept
  std::vector<std::vector<bool>> irrelevant_at;  // [level][coordinate]
  std::vector<unsigned> threshold_precision;     // per coordinate
};

inline RelevanceProfile relevance_threshold(const space::Coordinatization& xi,
                                            const Measurement& m, const space::Universe& u,
                                            std::string xi_name = "identity") {
  m.check();
  const std::size_t width = xi(u.elements().front()).size();
  RelevanceProfile profile;
  profile.measurement_name = m.name;
  profile.coordinatization_name = std::move(xi_name);
  profile.levels = m.precision_levels;
  profile.threshold_precision.assign(width, 0);

  for (unsigned p : profile.levels) {
    const space::SubsetFamily family = coarsen(m, p, u);
    std::vector<bool> irrelevant(width, true);
    for (const space::LabeledSubset& c : family.classes()) {
      for (std::size_t i = 0; i < width; ++i) {
        if (!irrelevant[i]) continue;
        if (!space::is_uniform(i, c.elements, xi) || !space::is_independent(i, c.elements, xi))
          irrelevant[i] = false;
      }
    }
    for (std::size_t i = 0; i < width; ++i)
      if (!irrelevant[i] && p > profile.threshold_precision[i]) profile.threshold_precision[i] = p;
    profile.irrelevant_at.push_back(std::move(irrelevant));
  }
  return profile;
}

enum class Band { Frozen, Informative, Noise };

inline const char* band_name(Band b) {
  switch (b) {
    case Band::Frozen: return "frozen";
    case Band::Informative: return "informative";
    case Band::Noise: return "noise";
  }
  return "?";
}

struct VariabilityConfig {
  double noise_cutoff = 0.45;  // flip_rate above this is tagged Noise
};

// Per-coordinate flip rate over a time-ordered stream: the fraction of
// consecutive steps on which the coordinate changes value.
struct VariabilityScore {
  std::vector<double> flip_rate;
  std::vector<Band> band;
};

inline VariabilityScore variability_score(std::span<const BitVector> stream,
                                          const space::Coordinatization& xi,
                                          VariabilityConfig cfg = {}) {
  require(stream.size() >= 2, errc::stream_too_short,
          "variability needs at least two stream entries");
  const std::size_t width = xi(stream.front()).size();
  std::vector<std::uint64_t> flips(width, 0);
  BitVector prev = xi(stream.front());
  for (std::size_t t = 1; t < stream.size(); ++t) {
    const BitVector cur = xi(stream[t]);
    require(cur.size() == width, errc::size_mismatch, "stream coordinate width changed");
    for (std::size_t i = 0; i < width; ++i)
      if (cur.get(i) != prev.get(i)) ++flips[i];
    prev = cur;
  }
  VariabilityScore score;
  score.flip_rate.resize(width);
  score.band.resize(width);
  const double steps = static_cast<double>(stream.size() - 1);
  for (std::size_t i = 0; i < width; ++i) {
    score.flip_rate[i] = static_cast<double>(flips[i]) / steps;
    score.band[i] = flips[i] == 0              ? Band::Frozen
                    : score.flip_rate[i] > cfg.noise_cutoff ? Band::Noise
                                                            : Band::Informative;
  }
  return score;
}

// Unified descending sort key for lossy compression. Primary decides; the
// secondary breaks primary ties (variability, when both sources are given);
// remaining ties break by ascending coordinate index.
struct ScoreVector {
  std::vector<double> primary;
  std::vector<double> secondary;

  double primary_at(std::size_t i) const { return i < primary.size() ? primary[i] : 0.0; }
  double secondary_at(std::size_t i) const { return i < secondary.size() ? secondary[i] : 0.0; }
};

inline double variability_key(const VariabilityScore& v, std::size_t i) {
  // Band outranks rate: informative > noise > frozen, per-band rate refines.
  const double rank = v.band[i] == Band::Informative ? 2.0 : v.band[i] == Band::Noise ? 1.0 : 0.0;
  return 2.0 * rank + v.flip_rate[i];
}

inline ScoreVector scores_from(const RelevanceProfile& p) {
  ScoreVector s;
  for (unsigned t : p.threshold_precision) s.primary.push_back(static_cast<double>(t));
  return s;
}

inline ScoreVector scores_from(const VariabilityScore& v) {
  ScoreVector s;
  for (std::size_t i = 0; i < v.flip_rate.size(); ++i) s.primary.push_back(variability_key(v, i));
  return s;
}

inline ScoreVector scores_from(const RelevanceProfile& p, const VariabilityScore& v) {
  ScoreVector s = scores_from(p);
  for (std::size_t i = 0; i < v.flip_rate.size(); ++i) s.secondary.push_back(variability_key(v, i));
  return s;
}

namespace detail {

// The class's irrelevant coordinates ordered by the score key, best first.
inline std::vector<std::size_t> ranked_irrelevant_bits(const model::CompleteModel& m,
                                                       const model::ClassBlock& b,
                                                       const ScoreVector& s) {
  std::vector<std::size_t> bits;
  for (std::size_t i = m.n_bits - b.irrelevant_bit_count(); i < m.n_bits; ++i) bits.push_back(i);
  std::stable_sort(bits.begin(), bits.end(), [&](std::size_t x, std::size_t y) {
    if (s.primary_at(x) != s.primary_at(y)) return s.primary_at(x) > s.primary_at(y);
    if (s.secondary_at(x) != s.secondary_at(y)) return s.secondary_at(x) > s.secondary_at(y);
    return x < y;
  });
  return bits;
}

}  // namespace detail

// Lossy compression: keep only the `keep` highest-scoring irrelevant
// coordinates of x's class. The dropped coordinates are re-drawn on
// decompression, so the reconstruction always stays inside x's class.
inline tasks::CompressedCode lossy_compress(const BitVector& x, const model::CompleteModel& m,
                                            const ScoreVector& scores, std::size_t keep) {
  const tasks::CompressedCode full = tasks::compress(x, m);
  const model::ClassBlock& b = m.block(full.class_label);
  require(keep <= b.irrelevant_bit_count(), errc::invalid_argument,
          "keep = " + std::to_string(keep) + " exceeds the class's " +
              std::to_string(b.irrelevant_bit_count()) + " irrelevant coordinates");
  std::vector<std::size_t> ranked = detail::ranked_irrelevant_bits(m, b, scores);
  ranked.resize(keep);
  std::sort(ranked.begin(), ranked.end());  // stored in ascending coordinate order

  const BitVector pattern = m.forward(x);
  BitVector kept(keep);
  for (std::size_t j = 0; j < keep; ++j) kept.set(j, pattern.get(ranked[j]));
  return {full.class_label, kept};
}

inline BitVector lossy_decompress(const tasks::CompressedCode& code,
                                  const model::CompleteModel& m, const ScoreVector& scores,
                                  std::uint64_t seed) {
  const model::ClassBlock& b = m.block(code.class_label);
  const std::size_t keep = code.irrelevant_bits.size();
  require(keep <= b.irrelevant_bit_count(), errc::size_mismatch,
          "lossy code longer than the class's irrelevant coordinates");

  std::vector<std::size_t> ranked = detail::ranked_irrelevant_bits(m, b, scores);
  ranked.resize(keep);
  std::sort(ranked.begin(), ranked.end());

  const std::size_t first_free = m.n_bits - b.irrelevant_bit_count();
  std::vector<std::size_t> dropped;
  {
    std::size_t j = 0;
    for (std::size_t i = first_free; i < m.n_bits; ++i) {
      if (j < keep && ranked[j] == i)
        ++j;
      else
        dropped.push_back(i);
    }
  }

  BitVector pattern = m.index_pattern(b.start);  // class prefix, free bits zero
  for (std::size_t j = 0; j < keep; ++j) pattern.set(ranked[j], code.irrelevant_bits.get(j));

  // If every completion of the kept bits is a dummy slot the code cannot be
  // realized; otherwise rejection sampling over the dropped bits terminates.
  {
    std::uint64_t matching_dummies = 0;
    for (std::uint64_t s : b.dummy_slots) {
      const BitVector p = m.index_pattern(s);
      bool match = true;
      for (std::size_t j = 0; j < keep && match; ++j)
        if (p.get(ranked[j]) != pattern.get(ranked[j])) match = false;
      if (match) ++matching_dummies;
    }
    require(matching_dummies < (std::uint64_t{1} << dropped.size()), errc::dummy_code,
            "every completion of the lossy code lands on padding");
  }

  Rng rng(seed);
  for (;;) {
    BitVector candidate = pattern;
    for (std::size_t i : dropped) candidate.set(i, rng.next_bit());
    if (const auto e = m.inverse(candidate)) return *e;
  }
}

}  // namespace cmc::relevance
