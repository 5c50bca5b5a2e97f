#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "cmc/tasks.hpp"
#include "fixtures.hpp"

using namespace cmc;
using namespace cmc::tasks;
using cmc::space::SubsetFamily;
using cmc::space::Universe;
using fixtures::bv;
using fixtures::bvs;

namespace {

// 3 real elements in one class forces one padding slot; the universe is a
// strict subset of B^3 so truly unknown elements exist.
model::CompleteModel padded_three_model() {
  Universe u = Universe::of(3, bvs({"000", "011", "101", "110"}));
  const SubsetFamily f =
      SubsetFamily::create(std::move(u), {{"A", bvs({"000", "011", "101"})}});
  return model::build_common_complete_model(f, true);
}

}  // namespace

TEST_CASE("classify: worked four-bit cases") {
  const model::CompleteModel m = fixtures::four_bit_model();
  CHECK(classify(bv("0110"), m) == "C2");
  for (const char* s : {"0010", "0101", "1000", "1100"})
    CHECK(classify(bv(s), m) == "C1");
  // 0000 belongs to no class: its index lies outside every class interval
  CHECK_FALSE(classify(bv("0000"), m).has_value());
}

TEST_CASE("classify agrees with set membership on the whole universe") {
  const model::CompleteModel m = fixtures::four_bit_model();
  const SubsetFamily f = fixtures::four_bit_family();
  for (const BitVector& x : f.universe().elements()) {
    std::optional<std::string> expected;
    for (const auto& c : f.classes())
      if (std::find(c.elements.begin(), c.elements.end(), x) != c.elements.end())
        expected = c.label;
    CHECK(classify(x, m) == expected);
  }
}

TEST_CASE("classify rejects elements outside the universe") {
  const model::CompleteModel m = padded_three_model();
  CHECK_THROWS_AS(classify(bv("111"), m), Error);  // universe is only {000,011,101}
  try {
    classify(bv("111"), m);
  } catch (const Error& e) {
    CHECK(e.code() == errc::unknown_element);
  }
}

TEST_CASE("decode: exhausting the free patterns yields exactly the class") {
  const model::CompleteModel m = fixtures::four_bit_model();
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 32; ++seed) seen.insert(decode(m, "C2", seed).to_string());
  CHECK(seen == std::set<std::string>{"0110", "1111"});
}

TEST_CASE("decode: singleton class always returns its element") {
  Universe u = Universe::full(2);
  const SubsetFamily f = SubsetFamily::create(std::move(u), {{"A", bvs({"10"})}});
  const model::CompleteModel m = model::build_common_complete_model(f, true);
  for (std::uint64_t seed = 0; seed < 8; ++seed) CHECK(decode(m, "A", seed) == bv("10"));
}

TEST_CASE("decode: draws stay uniform over real elements with padding") {
  const model::CompleteModel m = padded_three_model();
  std::map<std::string, int> freq;
  const int draws = 3000;
  for (int i = 0; i < draws; ++i) ++freq[decode(m, "A", split_seed(5, "draw", i)).to_string()];
  CHECK(freq.size() == 3);
  for (const auto& [element, count] : freq) {
    // binomial 3 sigma around draws/3
    CHECK(count > draws / 3 - 3 * std::sqrt(draws * (1.0 / 3) * (2.0 / 3)));
    CHECK(count < draws / 3 + 3 * std::sqrt(draws * (1.0 / 3) * (2.0 / 3)));
  }
}

TEST_CASE("enumerate_class lists each real element exactly once") {
  const model::CompleteModel m = fixtures::four_bit_model();
  CHECK(enumerate_class(m, "C3") == bvs({"0111", "1001"}));

  std::vector<BitVector> all;
  for (const char* label : {"C1", "C2", "C3"}) {
    const auto members = enumerate_class(m, label);
    all.insert(all.end(), members.begin(), members.end());
  }
  std::sort(all.begin(), all.end());
  CHECK(all.size() == 8);
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());

  // padded class: 3 elements out of a 4-slot interval
  const model::CompleteModel p = padded_three_model();
  CHECK(enumerate_class(p, "A").size() == 3);
  CHECK(p.block("A").padded_size == 4);
}

TEST_CASE("compress: worked values and per-class injectivity") {
  const model::CompleteModel m = fixtures::four_bit_model();

  const CompressedCode c1 = compress(bv("1111"), m);
  CHECK(c1.class_label == "C2");
  CHECK(c1.irrelevant_bits.to_string() == "1");

  const CompressedCode c2 = compress(bv("0010"), m);
  CHECK(c2.class_label == "C1");
  CHECK(c2.irrelevant_bits.to_string() == "00");

  std::set<std::string> codes;
  for (const char* s : {"0010", "0101", "1000", "1100"})
    codes.insert(compress(bv(s), m).irrelevant_bits.to_string());
  CHECK(codes.size() == 4);

  CHECK_THROWS_AS(compress(bv("0000"), m), Error);  // outlier
}

TEST_CASE("decompress: worked values, round-trip, dummy codes") {
  const model::CompleteModel m = fixtures::four_bit_model();
  CHECK(decompress({"C1", bv("00")}, m) == bv("0010"));
  CHECK(decompress({"C2", bv("0")}, m) == bv("0110"));

  const SubsetFamily f = fixtures::four_bit_family();
  for (const auto& c : f.classes())
    for (const BitVector& x : c.elements) CHECK(decompress(compress(x, m), m) == x);

  // code length equals log2 of the padded class size
  CHECK(compress(bv("0010"), m).irrelevant_bits.size() == m.block("C1").irrelevant_bit_count());

  const model::CompleteModel p = padded_three_model();
  CHECK_THROWS_AS(decompress({"A", bv("11")}, p), Error);  // the padding slot
  try {
    decompress({"A", bv("11")}, p);
  } catch (const Error& e) {
    CHECK(e.code() == errc::dummy_code);
  }
  CHECK_THROWS_AS(decompress({"A", bv("1")}, p), Error);  // wrong code width
}

TEST_CASE("fit_regression: noiseless grid curves are recovered exactly") {
  RegressionGrid grid;
  grid.sample_points = {0.0, 0.5, 1.0, 1.5, 2.0};
  grid.pairs = {{1.0, 0.2}, {2.0, 0.5}, {2.0, 1.0}, {0.5, 0.7}};
  grid.noise_sigma = 0.1;

  std::vector<std::pair<double, double>> points;
  for (double x : grid.sample_points) points.push_back({x, 2.0 * std::exp(0.5 * x)});
  CHECK(fit_regression(points, grid) == std::pair{2.0, 0.5});
}

TEST_CASE("fit_regression: perturbations below half the curve gap keep the class") {
  RegressionGrid grid;
  grid.sample_points = {0.0, 1.0, 2.0};
  grid.pairs = {{1.0, 0.3}, {1.5, 0.3}, {1.0, 0.8}};
  grid.noise_sigma = 0.25;

  // oracle: smallest rms distance from curve 0 to any other grid curve
  auto curve = [&](std::size_t g, double x) {
    return grid.pairs[g].first * std::exp(grid.pairs[g].second * x);
  };
  double min_gap = 1e300;
  for (std::size_t g = 1; g < grid.pairs.size(); ++g) {
    double rss = 0;
    for (double x : grid.sample_points) {
      const double d = curve(g, x) - curve(0, x);
      rss += d * d;
    }
    min_gap = std::min(min_gap, std::sqrt(rss / grid.sample_points.size()));
  }
  const double eps = 0.4 * min_gap;
  REQUIRE(eps > 0);

  std::vector<std::pair<double, double>> points;
  int sign = 1;
  for (double x : grid.sample_points) {
    points.push_back({x, curve(0, x) + sign * eps});
    sign = -sign;
  }
  CHECK(fit_regression(points, grid) == grid.pairs[0]);
}

TEST_CASE("fit_regression: outlier floor and error paths") {
  RegressionGrid grid;
  grid.sample_points = {0.0, 1.0};
  grid.pairs = {{5.0, 0.5}, {7.0, 0.1}};
  grid.noise_sigma = 0.5;

  // y = 0 everywhere sits far from both curves; with the floor enabled the
  // best log-likelihood (computed here as the oracle) falls below it
  std::vector<std::pair<double, double>> flat = {{0.0, 0.0}, {1.0, 0.0}};
  double best = -1e300;
  for (const auto& [a, b] : grid.pairs) {
    double rss = 0;
    for (const auto& [x, y] : flat) {
      const double r = y - a * std::exp(b * x);
      rss += r * r;
    }
    best = std::max(best, -rss / (2 * grid.noise_sigma * grid.noise_sigma));
  }
  grid.log_likelihood_floor = best + 1.0;
  CHECK_FALSE(fit_regression(flat, grid).has_value());

  grid.log_likelihood_floor.reset();
  CHECK(fit_regression(flat, grid).has_value());

  CHECK_THROWS_AS(fit_regression({}, grid), Error);
  std::vector<std::pair<double, double>> off_grid = {{0.25, 1.0}};
  CHECK_THROWS_AS(fit_regression(off_grid, grid), Error);
}
