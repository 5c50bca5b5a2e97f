#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmc/io.hpp"
#include "fixtures.hpp"

using namespace cmc;
using namespace cmc::io;
using fixtures::bv;
using fixtures::bvs;

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "cmc_io_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("bit-line files: comments, blank lines, width checks") {
  std::istringstream in("# header\n0011\n\n0101\r\n# trailing comment\n1100\n");
  const auto elements = read_bit_lines(in);
  CHECK(elements == bvs({"0011", "0101", "1100"}));

  std::istringstream bad("001\n01\n");
  CHECK_THROWS_AS(read_bit_lines(bad), Error);

  const std::string text = format_bit_lines(elements);
  CHECK(text.rfind("# cmc", 0) == 0);  // version header comes first
  std::istringstream round(text);
  CHECK(read_bit_lines(round) == elements);
}

TEST_CASE("stream files accept optional timestamps") {
  std::istringstream in("0 0101\n1 0111\n0011\n");
  const auto stream = read_stream(in);
  CHECK(stream == bvs({"0101", "0111", "0011"}));

  std::istringstream bad("0 0101 junk\n");
  CHECK_THROWS_AS(read_stream(bad), Error);
}

TEST_CASE("distribution tables round-trip through JSON") {
  const auto subset = fixtures::three_bit_subset();
  const auto table = space::joint_distribution(subset, std::vector<std::size_t>{0, 2},
                                               space::identity_coordinatization());
  const json j = distribution_to_json(table);
  CHECK(j["entries"].size() == table.counts.size());
  const auto back = distribution_from_json(j);
  CHECK(back.denominator == table.denominator);
  CHECK(back.counts == table.counts);
  CHECK(back.indices == table.indices);
}

TEST_CASE("model JSON: save -> load -> save is byte-identical") {
  const auto m = fixtures::four_bit_model();
  const fs::path path = temp_dir() / "model.json";
  save_model(m, path);
  const std::string first = read_file(path);

  const auto loaded = load_model(path);
  save_model(loaded, path);
  CHECK(read_file(path) == first);

  // loaded model behaves like the original
  CHECK(loaded.forward(bv("0110")) == m.forward(bv("0110")));
  CHECK(loaded.coordinate_classes == m.coordinate_classes);
  CHECK(loaded.block("C2").start == 4);
}

TEST_CASE("model JSON rejects malformed input") {
  CHECK_THROWS_AS(model_from_json(parse_json("{}", "test")), Error);
  json j = model_to_json(fixtures::four_bit_model());
  j["mapping"] = json::array();
  CHECK_THROWS_AS(model_from_json(j), Error);
}

TEST_CASE("compressed-code files: golden bytes and round-trip") {
  const tasks::CompressedCode code{"C2", bv("1")};
  const std::string raw = format_code(code);
  CHECK(raw == std::string("CMC1 C2 1\n") + '\x80');  // single bit packs MSB-first

  CHECK(parse_code(raw) == code);

  const tasks::CompressedCode wide{"K", bv("101000011")};  // 9 bits -> 2 bytes
  const std::string wraw = format_code(wide);
  CHECK(wraw.size() == std::string("CMC1 K 9\n").size() + 2);
  CHECK(parse_code(wraw) == wide);

  CHECK_THROWS_AS(parse_code("bogus\n"), Error);
  CHECK_THROWS_AS(parse_code("CMC1 C2 9\n\x80"), Error);  // payload too short
}

TEST_CASE("pbm and ppm writers") {
  const BitVector img = corpora::render_geometry(corpora::GeomSpec::single_square(2, 0, 0, 1));
  const std::string pbm = format_pbm(img, 2);
  CHECK(pbm == "P1\n# cmc " + std::string(kVersion) + "\n2 2\n1 0\n0 0\n");

  corpora::GeomSpec color;
  color.side = 1;
  color.color_depth = 24;
  color.shapes = {corpora::Rect{0, 0, 0, 0, 0xff8001}};
  const std::string ppm = format_ppm(corpora::render_geometry(color), 1);
  CHECK(ppm == "P3\n# cmc " + std::string(kVersion) + "\n1 1\n255\n255 128 1\n");
}

TEST_CASE("flow specs parse both dependence kinds") {
  const json j = parse_json(R"({
    "matrix": [[0.0, 1.0], [1.0, 0.0]],
    "dependence": "power:2",
    "g0": [1.0, 0.5],
    "k0": 1.0, "k1": 2.0, "steps": 50
  })",
                            "flow");
  const FlowSpec spec = flow_spec_from_json(j);
  CHECK(spec.beta.at(2.0)(0, 1) == 4.0);
  CHECK(spec.g0(1) == 0.5);
  CHECK(spec.steps == 50);

  json bad = j;
  bad["dependence"] = "exp";
  CHECK_THROWS_AS(flow_spec_from_json(bad), Error);
  bad = j;
  bad["g0"] = {1.0};
  CHECK_THROWS_AS(flow_spec_from_json(bad), Error);
}

TEST_CASE("corpora specs parse and validate") {
  const auto ising = ising_spec_from_json(parse_json(
      R"({"side": 2, "beta": 0.5, "j_pair": 1.0, "h_field": 0.25})", "ising"));
  CHECK(ising.side == 2);
  CHECK(ising.h_field == 0.25);

  const auto geom = geom_spec_from_json(parse_json(
      R"({"side": 3, "shapes": [{"x": [1, 1], "y": [1, 1]}]})", "geom"));
  CHECK(corpora::render_geometry(geom).count_ones() == 1);

  CHECK_THROWS_AS(geom_spec_from_json(parse_json(
                      R"({"side": 3, "shapes": [{"x": [1, 5], "y": [0, 0]}]})", "geom")),
                  Error);
}

TEST_CASE("atomic writes leave no partial files on failure") {
  const fs::path dir = temp_dir() / "nope" / "deeper";
  CHECK_THROWS_AS(write_file_atomic(dir / "out.txt", "data"), Error);
  CHECK_FALSE(fs::exists(dir));

  const fs::path ok = temp_dir() / "ok.txt";
  write_file_atomic(ok, "data");
  CHECK(read_file(ok) == "data");
}
