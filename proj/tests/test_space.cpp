#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "cmc/rng.hpp"
#include "cmc/space.hpp"
#include "fixtures.hpp"

using namespace cmc;
using namespace cmc::space;
using fixtures::bv;
using fixtures::bvs;

namespace {

const Coordinatization kId = identity_coordinatization();

Rational bit_product(const BitVector& y, const std::vector<std::size_t>& idx) {
  for (std::size_t i : idx)
    if (!y.get(i)) return Rational(0);
  return Rational(1);
}

// Brute-force factorization oracle: coordinate i is independent iff every
// correlation E(xi_i * prod_{j in S} xi_j) with i not in S splits into
// E(xi_i) * E(prod_{j in S} xi_j). Used to cross-check is_independent.
bool independent_by_correlations(std::size_t i, const std::vector<BitVector>& subset,
                                 std::size_t width) {
  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < width; ++j)
    if (j != i) others.push_back(j);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others.size()); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < others.size(); ++j)
      if (mask & (std::uint64_t{1} << j)) s.push_back(others[j]);
    std::vector<std::size_t> with_i = s;
    with_i.push_back(i);
    const Rational lhs = correlation(with_i, subset, kId);
    const Rational rhs = correlation(std::vector<std::size_t>{i}, subset, kId) *
                         (s.empty() ? Rational(1) : correlation(s, subset, kId));
    if (lhs != rhs) return false;
  }
  return true;
}

std::vector<BitVector> random_subset(Rng& rng, std::size_t width) {
  std::vector<BitVector> out;
  const std::uint64_t universe = std::uint64_t{1} << width;
  for (std::uint64_t v = 0; v < universe; ++v)
    if (rng.next_bit()) out.push_back(BitVector::from_uint(v, width));
  if (out.empty()) out.push_back(BitVector::from_uint(rng.below(universe), width));
  return out;
}

}  // namespace

TEST_CASE("three-bit worked set: marginals, correlations, dependence") {
  const std::vector<BitVector> c = fixtures::three_bit_subset();

  for (std::size_t i = 0; i < 3; ++i) {
    const DistributionTable t = joint_distribution(c, std::vector<std::size_t>{i}, kId);
    CHECK(t.probability(bv("0")) == Rational(1, 2));
    CHECK(t.probability(bv("1")) == Rational(1, 2));
    CHECK(correlation(std::vector<std::size_t>{i}, c, kId) == Rational(1, 2));
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(correlation(std::vector<std::size_t>{i, j}, c, kId) == Rational(1, 4));
  CHECK(correlation(std::vector<std::size_t>{0, 1, 2}, c, kId) == Rational(1, 4));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(is_uniform(i, c, kId));
    CHECK_FALSE(is_independent(i, c, kId));
  }
}

TEST_CASE("joint distribution of a singleton is a point mass") {
  const std::vector<BitVector> c = {bv("101")};
  const DistributionTable t = joint_distribution(c, std::vector<std::size_t>{0, 1, 2}, kId);
  CHECK(t.counts.size() == 1);
  CHECK(t.probability(bv("101")) == Rational(1));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(is_deterministic(i, c, kId).has_value());
    CHECK_FALSE(is_uniform(i, c, kId));
    CHECK(is_independent(i, c, kId));
  }
}

TEST_CASE("full universe: uniform joint, all correlations 1/2^a") {
  const Universe u = Universe::full(3);
  const DistributionTable t =
      joint_distribution(u.elements(), std::vector<std::size_t>{0, 1, 2}, kId);
  CHECK(t.counts.size() == 8);
  for (const auto& [pattern, count] : t.counts) CHECK(count == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(is_independent(i, u.elements(), kId));
}

TEST_CASE("every a-point correlation over full B^N is 1/2^a, any bijection") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const Universe u = Universe::full(n);
    // a shuffled bijection of B^n onto itself
    std::vector<std::uint64_t> perm(u.size());
    for (std::size_t v = 0; v < perm.size(); ++v) perm[v] = v;
    Rng rng(11 + n);
    for (std::size_t v = perm.size(); v-- > 1;)
      std::swap(perm[v], perm[rng.below(v + 1)]);
    const Coordinatization xi = [&perm, n](const BitVector& x) {
      return BitVector::from_uint(perm[x.to_uint()], n);
    };
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
      CHECK(correlation(idx, u.elements(), xi) ==
            Rational(1, std::int64_t{1} << idx.size()));
    }
  }
}

TEST_CASE("expectation: golden values") {
  const std::vector<BitVector> c = fixtures::three_bit_subset();
  CHECK(expectation([](const BitVector& y) { return Rational(y.get(0) ? 1 : 0); }, c) ==
        Rational(1, 2));
  CHECK(expectation([](const BitVector&) { return Rational(1); }, c) == Rational(1));
  CHECK(expectation([](const BitVector& y) { return bit_product(y, {0, 1, 2}); }, c) ==
        Rational(1, 4));
  CHECK_THROWS_AS(expectation([](const BitVector&) { return Rational(1); },
                              std::vector<BitVector>{}),
                  cmc::Error);
}

TEST_CASE("probabilities always sum to exactly one") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const std::vector<BitVector> c = random_subset(rng, n);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.next_bit()) idx.push_back(i);
    if (idx.empty()) idx.push_back(0);
    CHECK(joint_distribution(c, idx, kId).total() == Rational(1));
  }
}

TEST_CASE("deterministic implies independent (exhaustive sweep)") {
  Rng rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    std::vector<BitVector> c = random_subset(rng, std::min<std::size_t>(n, 6));
    // force bit 0 deterministic by pinning it to 1
    for (BitVector& y : c) y.set(0, true);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    CHECK(is_deterministic(0, c, kId).has_value());
    CHECK(is_independent(0, c, kId));
  }
}

TEST_CASE("is_independent agrees with the correlation-factorization oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(5);  // up to 6 coordinates
    const std::vector<BitVector> c = random_subset(rng, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(is_independent(i, c, kId) == independent_by_correlations(i, c, n));
  }
}

TEST_CASE("bits_to_unit_interval") {
  CHECK(bits_to_unit_interval(bv("100")) == 0.5);
  CHECK(bits_to_unit_interval(bv("000")) == 0.0);
  // oracle: 1/2 + 1/4 + 1/8 + 1/16 evaluated directly
  const double expected = 1.0 / 2 + 1.0 / 4 + 1.0 / 8 + 1.0 / 16;
  CHECK(bits_to_unit_interval(bv("1111")) == expected);
  CHECK(expected == 0.9375);
  CHECK_THROWS_AS(bits_to_unit_interval(BitVector()), cmc::Error);

  SUBCASE("injective and monotone on fixed length") {
    double prev = -1.0;
    for (std::uint64_t v = 0; v < (1u << 12); ++v) {
      const double x = bits_to_unit_interval(BitVector::from_uint(v, 12));
      CHECK(x > prev);
      prev = x;
    }
  }
}

TEST_CASE("family validation catches overlaps and strays") {
  const Universe u = Universe::full(3);
  CHECK_THROWS_AS(SubsetFamily::create(u, {{"A", bvs({"001"})}, {"B", bvs({"001"})}}),
                  cmc::Error);
  CHECK_THROWS_AS(SubsetFamily::create(u, {{"A", {}}}), cmc::Error);
  const SubsetFamily f = SubsetFamily::create(u, {{"A", bvs({"001", "010"})}});
  CHECK(f.union_elements().size() == 2);
}

TEST_CASE("universe rejects duplicates and width mismatches") {
  CHECK_THROWS_AS(Universe::of(3, bvs({"001", "001"})), cmc::Error);
  CHECK_THROWS_AS(Universe::of(3, bvs({"001", "01"})), cmc::Error);
  CHECK_THROWS_AS(Universe::of(3, {}), cmc::Error);
}
