#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cmc/bits.hpp"
#include "cmc/corpora.hpp"
#include "cmc/error.hpp"
#include "cmc/model.hpp"
#include "cmc/relevance.hpp"
#include "cmc/rgflow.hpp"
#include "cmc/space.hpp"
#include "cmc/tasks.hpp"
#include "cmc/version.hpp"

namespace cmc::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// files

// Write-to-temp + rename, so failed runs never leave partial outputs behind.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary);
    require(out.good(), errc::io_error, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(errc::io_error, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(errc::io_error, "cannot move temporary file onto " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(std::string_view text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), errc::format_error, what + ": not valid JSON");
  return j;
}

inline json load_json(const std::filesystem::path& path) {
  return parse_json(read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// element files: newline-delimited fixed-width 0/1 strings, MSB first.
// '#' lines are comments; blank lines are skipped.

inline std::vector<BitVector> read_bit_lines(std::istream& in) {
  std::vector<BitVector> out;
  std::string line;
  std::size_t width = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    BitVector b = BitVector::from_string(line);
    if (out.empty())
      width = b.size();
    else
      require(b.size() == width, errc::size_mismatch,
              "line " + std::to_string(lineno) + ": width " + std::to_string(b.size()) +
                  " differs from first line's " + std::to_string(width));
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<BitVector> read_bit_lines_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  return read_bit_lines(in);
}

inline std::string format_bit_lines(std::span<const BitVector> elements) {
  std::string out = "# " + std::string(kToolName) + " " + kVersion + "\n";
  for (const BitVector& e : elements) {
    out += e.to_string();
    out += '\n';
  }
  return out;
}

// Stream files: like element files but with an optional integer timestamp
// prefix per line, separated by whitespace. Timestamps only order the stream.
inline std::vector<BitVector> read_stream(std::istream& in) {
  std::vector<BitVector> out;
  std::string line;
  std::size_t width = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream tokens(line);
    std::string first, second, extra;
    tokens >> first >> second >> extra;
    require(extra.empty(), errc::format_error,
            "line " + std::to_string(lineno) + ": expected [timestamp] bits");
    // with two tokens the first is the (ignored) timestamp
    BitVector b = BitVector::from_string(second.empty() ? first : second);
    if (out.empty())
      width = b.size();
    else
      require(b.size() == width, errc::size_mismatch,
              "line " + std::to_string(lineno) + ": stream width changed");
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<BitVector> read_stream_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path.string());
  return read_stream(in);
}

// ---------------------------------------------------------------------------
// distribution tables

inline json distribution_to_json(const space::DistributionTable& t) {
  json j;
  j["format"] = "cmc-distribution";
  j["version"] = kVersion;
  j["indices"] = t.indices;
  json entries = json::object();
  for (const auto& [pattern, count] : t.counts)
    entries[pattern.to_string()] = {count, t.denominator};
  j["entries"] = std::move(entries);
  return j;
}

inline space::DistributionTable distribution_from_json(const json& j) {
  space::DistributionTable t;
  t.indices = j.at("indices").get<std::vector<std::size_t>>();
  for (const auto& [key, value] : j.at("entries").items()) {
    require(value.is_array() && value.size() == 2, errc::format_error,
            "distribution entry must be [numerator, denominator]");
    t.counts[BitVector::from_string(key)] = value[0].get<std::uint64_t>();
    t.denominator = value[1].get<std::uint64_t>();
  }
  return t;
}

// ---------------------------------------------------------------------------
// models

inline json model_to_json(const model::CompleteModel& m) {
  json j;
  j["format"] = "cmc-model";
  j["version"] = kVersion;
  j["n_bits"] = m.n_bits;
  j["element_width"] = m.element_width;
  j["union_padded_size"] = m.union_padded_size;
  j["union_dummies"] = m.union_dummy_slots;
  json classes = json::array();
  for (const model::ClassBlock& b : m.classes) {
    json cb;
    cb["label"] = b.label;
    cb["start"] = b.start;
    cb["padded_size"] = b.padded_size;
    cb["n_real"] = b.n_real;
    cb["dummies"] = b.dummy_slots;
    classes.push_back(std::move(cb));
  }
  j["classes"] = std::move(classes);
  json mapping = json::array();
  for (const auto& slot : m.slots)
    mapping.push_back(slot ? json(slot->to_string()) : json(nullptr));
  j["mapping"] = std::move(mapping);
  json coords = json::array();
  for (const model::CoordinateClass& cc : m.coordinate_classes) {
    json c;
    c["tag"] = model::tag_name(cc.tag);
    c["class_values"] = cc.class_values;
    if (cc.union_value)
      c["union_value"] = *cc.union_value;
    else
      c["union_value"] = nullptr;
    coords.push_back(std::move(c));
  }
  j["coordinate_classes"] = std::move(coords);
  return j;
}

inline model::Tag tag_from_name(const std::string& name) {
  if (name == "overall_relevant") return model::Tag::OverallRelevant;
  if (name == "partially_relevant") return model::Tag::PartiallyRelevant;
  if (name == "irrelevant") return model::Tag::Irrelevant;
  if (name == "residual") return model::Tag::Residual;
  fail(errc::format_error, "unknown coordinate tag " + name);
}

inline model::CompleteModel model_from_json(const json& j) {
  require(j.value("format", "") == "cmc-model", errc::format_error, "not a cmc-model file");
  model::CompleteModel m;
  m.n_bits = j.at("n_bits").get<std::size_t>();
  m.element_width = j.at("element_width").get<std::size_t>();
  m.union_padded_size = j.at("union_padded_size").get<std::uint64_t>();
  m.union_dummy_slots = j.at("union_dummies").get<std::vector<std::uint64_t>>();
  for (const json& cb : j.at("classes")) {
    model::ClassBlock b;
    b.label = cb.at("label").get<std::string>();
    b.start = cb.at("start").get<std::uint64_t>();
    b.padded_size = cb.at("padded_size").get<std::uint64_t>();
    b.n_real = cb.at("n_real").get<std::uint64_t>();
    b.dummy_slots = cb.at("dummies").get<std::vector<std::uint64_t>>();
    m.classes.push_back(std::move(b));
  }
  const json& mapping = j.at("mapping");
  require(mapping.size() == (std::uint64_t{1} << m.n_bits), errc::format_error,
          "mapping length != 2^n_bits");
  m.slots.reserve(mapping.size());
  for (std::size_t s = 0; s < mapping.size(); ++s) {
    if (mapping[s].is_null()) {
      m.slots.emplace_back(std::nullopt);
    } else {
      BitVector e = BitVector::from_string(mapping[s].get<std::string>());
      require(e.size() == m.element_width, errc::format_error, "mapping entry width mismatch");
      require(m.element_slot.emplace(e, s).second, errc::format_error,
              "duplicate element in mapping");
      m.slots.emplace_back(std::move(e));
    }
  }
  for (const json& c : j.at("coordinate_classes")) {
    model::CoordinateClass cc;
    cc.tag = tag_from_name(c.at("tag").get<std::string>());
    for (const auto& [label, v] : c.at("class_values").items()) cc.class_values[label] = v.get<int>();
    if (!c.at("union_value").is_null()) cc.union_value = c.at("union_value").get<int>();
    m.coordinate_classes.push_back(std::move(cc));
  }
  require(m.coordinate_classes.size() == m.n_bits, errc::format_error,
          "coordinate_classes length != n_bits");
  return m;
}

inline void save_model(const model::CompleteModel& m, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_json(m).dump(2) + "\n");
}

inline model::CompleteModel load_model(const std::filesystem::path& path) {
  return model_from_json(load_json(path));
}

// ---------------------------------------------------------------------------
// compressed codes: header line "CMC1 <class_label> <n_bits>", then
// ceil(n_bits/8) raw bytes, bits packed most-significant-first.

inline std::string format_code(const tasks::CompressedCode& code) {
  std::string out = "CMC1 " + code.class_label + " " +
                    std::to_string(code.irrelevant_bits.size()) + "\n";
  const std::size_t n = code.irrelevant_bits.size();
  for (std::size_t byte = 0; byte < (n + 7) / 8; ++byte) {
    unsigned char b = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      const std::size_t i = byte * 8 + j;
      if (i < n && code.irrelevant_bits.get(i)) b |= static_cast<unsigned char>(1u << (7 - j));
    }
    out.push_back(static_cast<char>(b));
  }
  return out;
}

inline tasks::CompressedCode parse_code(std::string_view raw) {
  const std::size_t eol = raw.find('\n');
  require(eol != std::string_view::npos, errc::format_error, "code file has no header line");
  std::istringstream header{std::string(raw.substr(0, eol))};
  std::string magic, label;
  std::size_t n_bits = 0;
  header >> magic >> label >> n_bits;
  require(magic == "CMC1" && !header.fail(), errc::format_error, "bad code header");
  const std::string_view payload = raw.substr(eol + 1);
  require(payload.size() == (n_bits + 7) / 8, errc::format_error,
          "code payload is " + std::to_string(payload.size()) + " bytes, expected " +
              std::to_string((n_bits + 7) / 8));
  BitVector bits(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    const unsigned char b = static_cast<unsigned char>(payload[i / 8]);
    bits.set(i, (b >> (7 - i % 8)) & 1u);
  }
  return {std::move(label), std::move(bits)};
}

// ---------------------------------------------------------------------------
// images

inline std::string format_pbm(const BitVector& image, std::size_t side) {
  require(image.size() == side * side, errc::size_mismatch, "pbm needs side^2 bits");
  std::string out = "P1\n# " + std::string(kToolName) + " " + kVersion + "\n" +
                    std::to_string(side) + " " + std::to_string(side) + "\n";
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      out += image.get(y * side + x) ? '1' : '0';
      out += x + 1 < side ? ' ' : '\n';
    }
  }
  return out;
}

// 24-bit pixels as P3 with 8-bit channels.
inline std::string format_ppm(const BitVector& image, std::size_t side) {
  require(image.size() == side * side * 24, errc::size_mismatch, "ppm needs side^2 * 24 bits");
  std::string out = "P3\n# " + std::string(kToolName) + " " + kVersion + "\n" +
                    std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  for (std::size_t p = 0; p < side * side; ++p) {
    unsigned v = 0;
    for (unsigned b = 0; b < 24; ++b) v = (v << 1) | (image.get(p * 24 + b) ? 1u : 0u);
    out += std::to_string((v >> 16) & 0xff) + " " + std::to_string((v >> 8) & 0xff) + " " +
           std::to_string(v & 0xff);
    out += (p + 1) % side == 0 ? '\n' : ' ';
  }
  return out;
}

// ---------------------------------------------------------------------------
// relevance / variability reports

inline json profile_to_json(const relevance::RelevanceProfile& p) {
  json j;
  j["format"] = "cmc-relevance-profile";
  j["version"] = kVersion;
  j["measurement"] = p.measurement_name;
  j["coordinatization"] = p.coordinatization_name;
  j["levels"] = p.levels;
  json coords = json::object();
  for (std::size_t i = 0; i < p.threshold_precision.size(); ++i) {
    json c;
    c["threshold_precision"] = p.threshold_precision[i];
    json tags = json::array();
    for (std::size_t l = 0; l < p.levels.size(); ++l)
      tags.push_back(p.irrelevant_at[l][i] ? "irrelevant" : "relevant");
    c["per_level"] = std::move(tags);
    coords[std::to_string(i)] = std::move(c);
  }
  j["coordinates"] = std::move(coords);
  return j;
}

inline json variability_to_json(const relevance::VariabilityScore& v) {
  json j;
  j["format"] = "cmc-variability";
  j["version"] = kVersion;
  json coords = json::object();
  for (std::size_t i = 0; i < v.flip_rate.size(); ++i) {
    json c;
    c["flip_rate"] = v.flip_rate[i];
    c["band"] = relevance::band_name(v.band[i]);
    coords[std::to_string(i)] = std::move(c);
  }
  j["coordinates"] = std::move(coords);
  return j;
}

// ---------------------------------------------------------------------------
// flow specs: {"matrix": [[...]], "dependence": "const"|"power:<p>",
//              "g0": [...], "k0": ..., "k1": ..., "steps": ...}

struct FlowSpec {
  rgflow::BetaMatrix beta;
  Eigen::VectorXd g0;
  double k0 = 1.0;
  double k1 = 1.0;
  int steps = 100;
};

inline FlowSpec flow_spec_from_json(const json& j) {
  const json& rows = j.at("matrix");
  require(rows.is_array() && !rows.empty(), errc::format_error, "matrix must be a 2d array");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == n, errc::format_error,
            "matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) b(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  const std::string dependence = j.value("dependence", "const");
  rgflow::BetaMatrix beta = [&] {
    if (dependence == "const") return rgflow::BetaMatrix::constant(b);
    if (dependence.rfind("power:", 0) == 0) {
      const double p = std::stod(dependence.substr(6));
      return rgflow::BetaMatrix::scaled_power(b, p);
    }
    fail(errc::format_error, "unknown dependence " + dependence + " (use const or power:<p>)");
  }();
  const std::vector<double> g0 = j.at("g0").get<std::vector<double>>();
  require(static_cast<Eigen::Index>(g0.size()) == n, errc::format_error,
          "g0 length != matrix dimension");
  FlowSpec spec{std::move(beta), Eigen::Map<const Eigen::VectorXd>(g0.data(),
                                                                   static_cast<Eigen::Index>(g0.size())),
                j.at("k0").get<double>(), j.at("k1").get<double>(), j.value("steps", 100)};
  return spec;
}

// ---------------------------------------------------------------------------
// corpora specs

inline corpora::IsingSpec ising_spec_from_json(const json& j) {
  corpora::IsingSpec s;
  s.side = j.at("side").get<std::size_t>();
  s.beta = j.value("beta", 0.0);
  s.j_pair = j.value("j_pair", 1.0);
  s.h_field = j.value("h_field", 0.0);
  s.check();
  return s;
}

inline json ising_spec_to_json(const corpora::IsingSpec& s) {
  json j;
  j["side"] = s.side;
  j["beta"] = s.beta;
  j["j_pair"] = s.j_pair;
  j["h_field"] = s.h_field;
  j["boundary"] = "open";  // the pair count stops at the lattice edge
  return j;
}

// Measurement specs: {"name": ..., "eval": "unit_interval"|"popcount"|"bit:<i>",
//                     "precision_levels": [...]}
inline relevance::Measurement measurement_from_json(const json& j) {
  relevance::Measurement m;
  m.name = j.value("name", "measurement");
  m.precision_levels = j.at("precision_levels").get<std::vector<unsigned>>();
  const std::string eval = j.at("eval").get<std::string>();
  if (eval == "unit_interval") {
    m.eval = [](const BitVector& x) { return space::bits_to_unit_interval(x); };
  } else if (eval == "popcount") {
    m.eval = [](const BitVector& x) { return static_cast<double>(x.count_ones()); };
  } else if (eval.rfind("bit:", 0) == 0) {
    const std::size_t i = std::stoul(eval.substr(4));
    m.eval = [i](const BitVector& x) { return x.get(i) ? 1.0 : 0.0; };
  } else {
    fail(errc::format_error, "unknown eval " + eval + " (use unit_interval, popcount, bit:<i>)");
  }
  m.check();
  return m;
}

inline corpora::GeomSpec geom_spec_from_json(const json& j) {
  corpora::GeomSpec g;
  g.side = j.at("side").get<std::size_t>();
  g.color_depth = j.value("color_depth", 1u);
  g.background_ones = j.value("background_ones", false);
  if (j.contains("shapes"))
    for (const json& r : j.at("shapes")) {
      corpora::Rect rect;
      rect.x_lo = r.at("x").at(0).get<std::size_t>();
      rect.x_hi = r.at("x").at(1).get<std::size_t>();
      rect.y_lo = r.at("y").at(0).get<std::size_t>();
      rect.y_hi = r.at("y").at(1).get<std::size_t>();
      rect.color = r.value("color", 1u);
      g.shapes.push_back(rect);
    }
  g.check();
  return g;
}

}  // namespace cmc::io
