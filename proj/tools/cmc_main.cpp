// cmc: build and query complete models of finite bit-string universes.
//
// Every verb writes a machine-readable result (stdout, or --out FILE written
// atomically) and a human-readable summary (stderr). Exit status: 0 success,
// 1 domain error, 2 usage error. All randomness derives from --seed, split
// per draw site, so identical invocations produce identical bytes.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cmc/corpora.hpp"
#include "cmc/io.hpp"
#include "cmc/model.hpp"
#include "cmc/relevance.hpp"
#include "cmc/rgflow.hpp"
#include "cmc/space.hpp"
#include "cmc/tasks.hpp"
#include "cmc/version.hpp"

namespace fs = std::filesystem;
using cmc::BitVector;
using cmc::errc;
using cmc::Error;
using json = cmc::io::json;

namespace {

const char* module_of(errc c) {
  switch (c) {
    case errc::empty_subset:
    case errc::index_out_of_range:
    case errc::empty_bit_sequence:
    case errc::unknown_element:
      return "space";
    case errc::not_power_of_two:
    case errc::overlapping_classes:
    case errc::not_a_bijection:
    case errc::unknown_class:
      return "model";
    case errc::outlier_not_compressible:
    case errc::dummy_code:
    case errc::empty_input:
      return "tasks";
    case errc::stream_too_short:
      return "relevance";
    case errc::dimension_mismatch:
    case errc::complex_spectrum:
    case errc::defective_matrix:
    case errc::non_positive_scale:
      return "rgflow";
    case errc::size_mismatch:
    case errc::too_large_for_exact:
    case errc::extent_out_of_range:
      return "corpora";
    default:
      return "cli";
  }
}

// machine-readable result: --out FILE (atomic) or stdout
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    cmc::io::write_file_atomic(out_path, content);
}

void emit_json(const std::string& out_path, const json& j) { emit(out_path, j.dump(2) + "\n"); }

json result_header(const char* format) {
  json j;
  j["format"] = format;
  j["version"] = cmc::kVersion;
  return j;
}

// ---------------------------------------------------------------------------
// family loading shared by build/verify

struct FamilyArgs {
  std::string universe_path;
  std::size_t full_universe = 0;
  std::vector<std::string> class_specs;  // LABEL=PATH

  void attach(CLI::App* sub) {
    sub->add_option("--universe", universe_path,
                    "universe element file (newline-delimited bit strings)");
    sub->add_option("--full-universe", full_universe, "use all of B^N for the given N");
    sub->add_option("--class", class_specs, "class as LABEL=PATH; repeatable")
        ->required()
        ->expected(-1);
  }

  cmc::space::SubsetFamily load() const {
    cmc::require(!universe_path.empty() || full_universe > 0, errc::invalid_argument,
                 "provide --universe FILE or --full-universe N");
    cmc::space::Universe u =
        universe_path.empty()
            ? cmc::space::Universe::full(full_universe)
            : [&] {
                auto elements = cmc::io::read_bit_lines_file(universe_path);
                cmc::require(!elements.empty(), errc::empty_input,
                             universe_path + " holds no elements");
                const std::size_t width = elements.front().size();
                return cmc::space::Universe::of(width, std::move(elements));
              }();
    std::vector<cmc::space::LabeledSubset> classes;
    for (const std::string& spec : class_specs) {
      const std::size_t eq = spec.find('=');
      cmc::require(eq != std::string::npos && eq > 0 && eq + 1 < spec.size(),
                   errc::invalid_argument, "--class expects LABEL=PATH, got " + spec);
      classes.push_back(
          {spec.substr(0, eq), cmc::io::read_bit_lines_file(spec.substr(eq + 1))});
    }
    return cmc::space::SubsetFamily::create(std::move(u), std::move(classes));
  }
};

std::string tag_summary(const cmc::model::CompleteModel& m) {
  std::size_t overall = 0, partial = 0, irrelevant = 0, residual = 0;
  for (const auto& cc : m.coordinate_classes) {
    switch (cc.tag) {
      case cmc::model::Tag::OverallRelevant: ++overall; break;
      case cmc::model::Tag::PartiallyRelevant: ++partial; break;
      case cmc::model::Tag::Irrelevant: ++irrelevant; break;
      case cmc::model::Tag::Residual: ++residual; break;
    }
  }
  std::string s = std::to_string(overall) + " overall relevant, " + std::to_string(partial) +
                  " partially relevant, " + std::to_string(irrelevant) + " irrelevant";
  if (residual) s += ", " + std::to_string(residual) + " residual";
  return s;
}

// ---------------------------------------------------------------------------
// verbs

struct BuildArgs {
  FamilyArgs family;
  bool no_pad = false;
  std::string out;
};

void run_build(const BuildArgs& a) {
  const auto family = a.family.load();
  const auto m = cmc::model::build_common_complete_model(family, !a.no_pad);
  cmc::require(!a.out.empty(), errc::invalid_argument, "build requires --out MODEL.json");
  cmc::io::save_model(m, a.out);
  std::cerr << "built model over " << m.slot_count() << " slots (N = " << m.n_bits << ")\n";
  for (const auto& b : m.classes)
    std::cerr << "  " << b.label << ": interval [" << b.start << ", " << b.start + b.padded_size
              << "), " << b.n_real << " real, " << b.irrelevant_bit_count()
              << " irrelevant bits\n";
  std::cerr << "  coordinates: " << tag_summary(m) << "\n";
  std::cerr << "wrote " << a.out << "\n";
}

struct VerifyArgs {
  FamilyArgs family;
  std::string model_path;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const auto family = a.family.load();
  const auto m = cmc::io::load_model(a.model_path);
  const auto report = cmc::model::verify_complete_model(m, family);

  json j = result_header("cmc-verification");
  j["checks"] = report.checks;
  j["ok"] = report.ok();
  json issues = json::array();
  for (const auto& issue : report.issues) {
    json i;
    i["scope"] = issue.scope;
    if (issue.coordinate)
      i["coordinate"] = *issue.coordinate;
    else
      i["coordinate"] = nullptr;
    i["what"] = issue.what;
    issues.push_back(std::move(i));
  }
  j["issues"] = std::move(issues);
  emit_json(a.out, j);

  if (report.ok()) {
    std::cerr << "verification passed (" << report.checks << " checks)\n";
    return 0;
  }
  std::cerr << "verification FAILED: " << report.issues.size() << " issue(s) of "
            << report.checks << " checks\n";
  for (std::size_t i = 0; i < report.issues.size() && i < 5; ++i)
    std::cerr << "  [" << report.issues[i].scope << "] " << report.issues[i].what << "\n";
  return 1;
}

struct ElementArgs {
  std::string model_path;
  std::string element;
  std::string out;
};

void run_classify(const ElementArgs& a) {
  const auto m = cmc::io::load_model(a.model_path);
  const BitVector x = BitVector::from_string(a.element);
  const auto label = cmc::tasks::classify(x, m);
  json j = result_header("cmc-classify");
  j["element"] = a.element;
  j["index_pattern"] = m.forward(x).to_string();
  j["label"] = label ? json(*label) : json(nullptr);
  j["outlier"] = !label.has_value();
  emit_json(a.out, j);
  std::cerr << a.element << " -> " << (label ? *label : std::string("OUTLIER")) << "\n";
}

struct DecodeArgs {
  std::string model_path;
  std::string label;
  std::uint64_t seed = cmc::kDefaultSeed;
  std::string out;
};

void run_decode(const DecodeArgs& a) {
  const auto m = cmc::io::load_model(a.model_path);
  const BitVector x = cmc::tasks::decode(m, a.label, a.seed);
  json j = result_header("cmc-decode");
  j["class"] = a.label;
  j["seed"] = a.seed;
  j["element"] = x.to_string();
  emit_json(a.out, j);
  std::cerr << "decoded " << a.label << " -> " << x.to_string() << "\n";
}

void run_compress(const ElementArgs& a) {
  const auto m = cmc::io::load_model(a.model_path);
  const auto code = cmc::tasks::compress(BitVector::from_string(a.element), m);
  emit(a.out, cmc::io::format_code(code));
  std::cerr << "compressed " << a.element << " -> class " << code.class_label << ", "
            << code.irrelevant_bits.size() << " bits (of " << a.element.size() << ")\n";
}

struct DecompressArgs {
  std::string model_path;
  std::string code_path;
  std::string out;
};

void run_decompress(const DecompressArgs& a) {
  const auto m = cmc::io::load_model(a.model_path);
  const auto code = cmc::io::parse_code(cmc::io::read_file(a.code_path));
  const BitVector x = cmc::tasks::decompress(code, m);
  json j = result_header("cmc-element");
  j["element"] = x.to_string();
  emit_json(a.out, j);
  std::cerr << "decompressed " << a.code_path << " -> " << x.to_string() << "\n";
}

struct RelevanceArgs {
  std::string measurement_path;
  std::string universe_path;
  std::size_t full_universe = 0;
  std::string model_path;
  std::string out;
};

void run_relevance(const RelevanceArgs& a) {
  const auto m = cmc::io::measurement_from_json(cmc::io::load_json(a.measurement_path));
  cmc::require(!a.universe_path.empty() || a.full_universe > 0, errc::invalid_argument,
               "provide --universe FILE or --full-universe N");
  cmc::space::Universe u = a.universe_path.empty()
                               ? cmc::space::Universe::full(a.full_universe)
                               : [&] {
                                   auto elements = cmc::io::read_bit_lines_file(a.universe_path);
                                   cmc::require(!elements.empty(), errc::empty_input,
                                                a.universe_path + " holds no elements");
                                   const std::size_t width = elements.front().size();
                                   return cmc::space::Universe::of(width, std::move(elements));
                                 }();
  cmc::space::Coordinatization xi = cmc::space::identity_coordinatization();
  std::string xi_name = "identity";
  std::optional<cmc::model::CompleteModel> model;
  if (!a.model_path.empty()) {
    model = cmc::io::load_model(a.model_path);
    xi = [&model](const BitVector& x) { return model->forward(x); };
    xi_name = a.model_path;
  }
  const auto profile = cmc::relevance::relevance_threshold(xi, m, u, xi_name);
  emit_json(a.out, cmc::io::profile_to_json(profile));
  std::cerr << "relevance sweep of " << m.name << " over " << u.size() << " elements, levels";
  for (unsigned p : profile.levels) std::cerr << " " << p;
  std::cerr << "\n  thresholds:";
  for (unsigned t : profile.threshold_precision) std::cerr << " " << t;
  std::cerr << "\n";
}

struct VariabilityArgs {
  std::string stream_path;
  std::string model_path;
  double cutoff = 0.45;
  std::string out;
};

void run_variability(const VariabilityArgs& a) {
  const auto stream = cmc::io::read_stream_file(a.stream_path);
  cmc::space::Coordinatization xi = cmc::space::identity_coordinatization();
  std::optional<cmc::model::CompleteModel> model;
  if (!a.model_path.empty()) {
    model = cmc::io::load_model(a.model_path);
    xi = [&model](const BitVector& x) { return model->forward(x); };
  }
  const auto score =
      cmc::relevance::variability_score(stream, xi, cmc::relevance::VariabilityConfig{a.cutoff});
  emit_json(a.out, cmc::io::variability_to_json(score));
  std::size_t frozen = 0, noise = 0;
  for (auto b : score.band) {
    frozen += b == cmc::relevance::Band::Frozen;
    noise += b == cmc::relevance::Band::Noise;
  }
  std::cerr << "variability over " << stream.size() << " steps: " << frozen << " frozen, "
            << score.band.size() - frozen - noise << " informative, " << noise << " noise\n";
}

struct RgflowArgs {
  std::string spec_path;
  std::string out;
};

void run_rgflow(const RgflowArgs& a) {
  const auto spec = cmc::io::flow_spec_from_json(cmc::io::load_json(a.spec_path));
  const auto es = cmc::rgflow::diagonalize(spec.beta, spec.k0);
  const auto tags = cmc::rgflow::classify_couplings(es);

  const Eigen::Index n = spec.g0.size();
  std::string csv = "# " + std::string(cmc::kToolName) + " " + cmc::kVersion + "\nk";
  for (Eigen::Index i = 0; i < n; ++i) csv += ",g_" + std::to_string(i);
  for (Eigen::Index i = 0; i < n; ++i) csv += ",h_" + std::to_string(i);
  csv += "\n";

  char buf[32];
  const auto append_row = [&](double k, const Eigen::VectorXd& g) {
    std::snprintf(buf, sizeof buf, "%.12g", k);
    csv += buf;
    const Eigen::VectorXd h = es.left.transpose() * g;
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.12g", g(i));
      csv += buf;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.12g", h(i));
      csv += buf;
    }
    csv += "\n";
  };

  Eigen::VectorXd g = spec.g0;
  double k = spec.k0;
  append_row(k, g);
  for (int step = 0; step < spec.steps; ++step) {
    const double k_next = spec.k0 + (spec.k1 - spec.k0) * (step + 1) / spec.steps;
    g = cmc::rgflow::flow_full({g, k}, spec.beta, k_next, 1).g;
    k = k_next;
    append_row(k, g);
  }
  emit(a.out, csv);

  std::cerr << "flow " << spec.k0 << " -> " << spec.k1 << " in " << spec.steps << " steps;"
            << " eigenvalues:";
  for (Eigen::Index i = 0; i < n; ++i)
    std::cerr << " " << es.eigenvalues(i) << " ("
              << cmc::rgflow::coupling_tag_name(tags[static_cast<std::size_t>(i)]) << ")";
  std::cerr << "\n";
}

struct GenIsingArgs {
  std::string spec_path;
  std::size_t samples = 1;
  std::size_t sweeps = 100;
  std::uint64_t seed = cmc::kDefaultSeed;
  std::string format = "bits";
  std::string out;
  std::string manifest;
};

void run_gen_ising(const GenIsingArgs& a) {
  const auto spec = cmc::io::ising_spec_from_json(cmc::io::load_json(a.spec_path));
  cmc::require(a.samples >= 1, errc::invalid_argument, "--samples must be >= 1");
  cmc::require(a.format == "bits" || a.format == "pbm", errc::invalid_argument,
               "--format must be bits or pbm");
  cmc::require(!a.out.empty(), errc::invalid_argument, "gen-ising requires --out");

  std::vector<BitVector> images;
  images.reserve(a.samples);
  for (std::size_t i = 0; i < a.samples; ++i)
    images.push_back(cmc::corpora::ising_sample(spec, cmc::split_seed(a.seed, "ising", i),
                                                a.sweeps));

  if (a.format == "bits") {
    emit(a.out, cmc::io::format_bit_lines(images));
  } else {
    fs::create_directories(a.out);
    for (std::size_t i = 0; i < images.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "sample_%04zu.pbm", i);
      cmc::io::write_file_atomic(fs::path(a.out) / name,
                                 cmc::io::format_pbm(images[i], spec.side));
    }
  }

  json manifest = result_header("cmc-ising-corpus");
  manifest["spec"] = cmc::io::ising_spec_to_json(spec);
  manifest["seed"] = a.seed;
  manifest["sweeps"] = a.sweeps;
  manifest["samples"] = a.samples;
  manifest["seed_site"] = "ising";
  const std::string manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  cmc::io::write_file_atomic(manifest_path, manifest.dump(2) + "\n");

  std::cerr << "sampled " << a.samples << " image(s) of " << spec.side << "x" << spec.side
            << " at beta = " << spec.beta << ", " << a.sweeps << " sweeps each\n"
            << "wrote " << a.out << " and " << manifest_path << "\n";
}

struct GenGeometryArgs {
  std::string spec_path;
  std::string format = "auto";
  std::string out;
};

void run_gen_geometry(const GenGeometryArgs& a) {
  const auto spec = cmc::io::geom_spec_from_json(cmc::io::load_json(a.spec_path));
  const BitVector image = cmc::corpora::render_geometry(spec);
  std::string format = a.format;
  if (format == "auto") format = spec.color_depth == 1 ? "pbm" : spec.color_depth == 24 ? "ppm" : "bits";
  if (format == "pbm") {
    cmc::require(spec.color_depth == 1, errc::invalid_argument, "pbm needs color_depth 1");
    emit(a.out, cmc::io::format_pbm(image, spec.side));
  } else if (format == "ppm") {
    cmc::require(spec.color_depth == 24, errc::invalid_argument, "ppm needs color_depth 24");
    emit(a.out, cmc::io::format_ppm(image, spec.side));
  } else if (format == "bits") {
    emit(a.out, cmc::io::format_bit_lines(std::vector<BitVector>{image}));
  } else {
    cmc::fail(errc::invalid_argument, "--format must be pbm, ppm, bits or auto");
  }
  std::cerr << "rendered " << spec.side << "x" << spec.side << " image, " << spec.shapes.size()
            << " shape(s), depth " << spec.color_depth << "\n";
}

struct CountBitsArgs {
  std::string kind;
  std::vector<std::uint64_t> params;
  std::string out;
};

void run_count_bits(const CountBitsArgs& a) {
  json j = result_header("cmc-counts");
  if (a.kind == "square") {
    cmc::require(a.params.size() == 1, errc::invalid_argument, "usage: count-bits square L");
    const std::size_t side = a.params[0];
    const std::uint64_t irrelevant = cmc::corpora::square_corpus_bits(side);
    const std::uint64_t total = static_cast<std::uint64_t>(side) * side;
    const std::uint64_t placements = cmc::corpora::square_corpus_placements(side);
    j["kind"] = "square";
    j["side"] = side;
    j["irrelevant_bits"] = irrelevant;
    j["total_bits"] = total;
    j["relevant_bits"] = total - irrelevant;
    j["valid_placements"] = placements;
    j["exact_irrelevant_bits"] = cmc::corpora::ceil_log2(placements);
    emit_json(a.out, j);
    std::cerr << "square on " << side << "x" << side << ": " << irrelevant
              << " irrelevant bits (naive fields), " << total - irrelevant << " relevant of "
              << total << "; " << placements << " valid placements ("
              << cmc::corpora::ceil_log2(placements) << " bits exact)\n";
  } else if (a.kind == "rects") {
    cmc::require(a.params.size() == 3, errc::invalid_argument,
                 "usage: count-bits rects L N_RECTS COLOR_DEPTH");
    const auto c = cmc::corpora::rect_corpus_bits(a.params[0], a.params[1],
                                                  static_cast<unsigned>(a.params[2]));
    j["kind"] = "rects";
    j["side"] = a.params[0];
    j["n_rects"] = a.params[1];
    j["color_depth"] = a.params[2];
    j["irrelevant_bits"] = c.irrelevant;
    j["total_bits"] = c.total;
    j["relevant_bits"] = c.relevant;
    emit_json(a.out, j);
    std::cerr << a.params[1] << " rect(s) on " << a.params[0] << "x" << a.params[0] << " at depth "
              << a.params[2] << ": " << c.irrelevant << " irrelevant bits, " << c.relevant
              << " relevant of " << c.total << "\n";
  } else {
    cmc::fail(errc::invalid_argument, "count-bits kind must be square or rects");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complete models of finite bit-string universes"};
  app.set_version_flag("--version", std::string(cmc::kToolName) + " " + cmc::kVersion);
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "construct a common complete model");
  build.family.attach(build_cmd);
  build_cmd->add_flag("--no-pad", build.no_pad,
                      "require power-of-two cardinalities instead of padding");
  build_cmd->add_option("--out", build.out, "output model JSON")->required();
  build_cmd->callback([&] { run_build(build); });

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "check a model against its family");
  verify.family.attach(verify_cmd);
  verify_cmd->add_option("--model", verify.model_path, "model JSON")->required();
  verify_cmd->add_option("--out", verify.out, "report JSON (default stdout)");
  int verify_rc = 0;
  verify_cmd->callback([&] { verify_rc = run_verify(verify); });

  ElementArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "classify an element, detecting outliers");
  classify_cmd->add_option("--model", classify.model_path, "model JSON")->required();
  classify_cmd->add_option("element", classify.element, "element bit string")->required();
  classify_cmd->add_option("--out", classify.out, "result JSON (default stdout)");
  classify_cmd->callback([&] { run_classify(classify); });

  DecodeArgs decode;
  auto* decode_cmd = app.add_subcommand("decode", "draw a uniform element of a class");
  decode_cmd->add_option("--model", decode.model_path, "model JSON")->required();
  decode_cmd->add_option("--label", decode.label, "class label")->required();
  decode_cmd->add_option("--seed", decode.seed, "rng seed");
  decode_cmd->add_option("--out", decode.out, "result JSON (default stdout)");
  decode_cmd->callback([&] { run_decode(decode); });

  ElementArgs compress;
  auto* compress_cmd = app.add_subcommand("compress", "store only the irrelevant coordinates");
  compress_cmd->add_option("--model", compress.model_path, "model JSON")->required();
  compress_cmd->add_option("element", compress.element, "element bit string")->required();
  compress_cmd->add_option("--out", compress.out, "code file (default stdout)");
  compress_cmd->callback([&] { run_compress(compress); });

  DecompressArgs decompress;
  auto* decompress_cmd = app.add_subcommand("decompress", "reconstruct an element from a code");
  decompress_cmd->add_option("--model", decompress.model_path, "model JSON")->required();
  decompress_cmd->add_option("--code", decompress.code_path, "code file")->required();
  decompress_cmd->add_option("--out", decompress.out, "result JSON (default stdout)");
  decompress_cmd->callback([&] { run_decompress(decompress); });

  RelevanceArgs relevance;
  auto* relevance_cmd =
      app.add_subcommand("relevance", "precision sweep of a measurement's coordinates");
  relevance_cmd->add_option("--measurement", relevance.measurement_path, "measurement JSON")
      ->required();
  relevance_cmd->add_option("--universe", relevance.universe_path, "universe element file");
  relevance_cmd->add_option("--full-universe", relevance.full_universe, "use all of B^N");
  relevance_cmd->add_option("--model", relevance.model_path,
                            "model JSON whose mapping supplies the coordinatization");
  relevance_cmd->add_option("--out", relevance.out, "profile JSON (default stdout)");
  relevance_cmd->callback([&] { run_relevance(relevance); });

  VariabilityArgs variability;
  auto* variability_cmd =
      app.add_subcommand("variability", "flip-rate scoring of a time-ordered stream");
  variability_cmd->add_option("--stream", variability.stream_path, "stream file")->required();
  variability_cmd->add_option("--model", variability.model_path,
                              "model JSON whose mapping supplies the coordinatization");
  variability_cmd->add_option("--cutoff", variability.cutoff, "noise flip-rate cutoff");
  variability_cmd->add_option("--out", variability.out, "scores JSON (default stdout)");
  variability_cmd->callback([&] { run_variability(variability); });

  RgflowArgs rgflow;
  auto* rgflow_cmd = app.add_subcommand("rgflow", "integrate a linearized coupling flow");
  rgflow_cmd->add_option("--spec", rgflow.spec_path, "flow spec JSON")->required();
  rgflow_cmd->add_option("--out", rgflow.out, "trajectory CSV (default stdout)");
  rgflow_cmd->callback([&] { run_rgflow(rgflow); });

  GenIsingArgs gen_ising;
  auto* gen_ising_cmd = app.add_subcommand("gen-ising", "sample lattice images");
  gen_ising_cmd->add_option("--spec", gen_ising.spec_path, "lattice spec JSON")->required();
  gen_ising_cmd->add_option("--samples", gen_ising.samples, "number of images");
  gen_ising_cmd->add_option("--sweeps", gen_ising.sweeps, "sweeps per image");
  gen_ising_cmd->add_option("--seed", gen_ising.seed, "rng seed");
  gen_ising_cmd->add_option("--format", gen_ising.format, "bits (one file) or pbm (directory)");
  gen_ising_cmd->add_option("--out", gen_ising.out, "output file or directory")->required();
  gen_ising_cmd->add_option("--manifest", gen_ising.manifest,
                            "manifest JSON path (default <out>.manifest.json)");
  gen_ising_cmd->callback([&] { run_gen_ising(gen_ising); });

  GenGeometryArgs gen_geometry;
  auto* gen_geometry_cmd = app.add_subcommand("gen-geometry", "render rectangle images");
  gen_geometry_cmd->add_option("--spec", gen_geometry.spec_path, "geometry spec JSON")
      ->required();
  gen_geometry_cmd->add_option("--format", gen_geometry.format, "pbm, ppm, bits or auto");
  gen_geometry_cmd->add_option("--out", gen_geometry.out, "output file (default stdout)");
  gen_geometry_cmd->callback([&] { run_gen_geometry(gen_geometry); });

  CountBitsArgs count_bits;
  auto* count_bits_cmd =
      app.add_subcommand("count-bits", "free-coordinate counts of geometric corpora");
  count_bits_cmd->add_option("kind", count_bits.kind, "square or rects")->required();
  count_bits_cmd->add_option("params", count_bits.params, "square: L; rects: L N_RECTS DEPTH");
  count_bits_cmd->add_option("--out", count_bits.out, "result JSON (default stdout)");
  count_bits_cmd->callback([&] { run_count_bits(count_bits); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: [" << module_of(e.code()) << "] " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return verify_rc;
}
