// Command-line front end: generate labeled trees, corrupt them through a
// deletion channel, reconstruct from traces, run seeded success-rate
// experiments, and numerically verify the analytic bounds.
//
// Wire formats: trees/shapes are JSON (see json_io.hpp); trace streams are
// JSON lines with the literal `null` marking a censored-away trace; labels
// print as 0/1 strings. Exit codes: 0 success, 2 algorithm-declared
// termination (undefined route / empty bucket / everything censored),
// 1 usage or input errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treerec/channel.hpp"
#include "treerec/harness.hpp"
#include "treerec/json_io.hpp"
#include "treerec/lp_recon.hpp"
#include "treerec/rng.hpp"
#include "treerec/spider_recon.hpp"
#include "treerec/string_recon.hpp"
#include "treerec/ted_recon.hpp"
#include "treerec/tree.hpp"

namespace {

using nlohmann::json;

std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Accepts either inline JSON (starts with '{') or a path to a JSON file.
std::string inline_or_file(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  return slurp_file(arg);
}

treerec::TreeShape load_shape(const std::string& arg) {
  return treerec::shape_from_json(json::parse(inline_or_file(arg)));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

struct TraceStream {
  std::vector<treerec::LabeledOrderedTree> trees;
  std::vector<std::optional<treerec::StringTrace>> strings;
  std::int64_t censored = 0;
};

treerec::StringTrace parse_bit_trace(const std::string& bits) {
  treerec::StringTrace out;
  out.reserve(bits.size());
  for (const char ch : bits) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("string trace must contain only 0/1 characters");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

TraceStream read_traces(std::istream& in, bool as_strings) {
  TraceStream stream;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    if (j.is_null()) {
      stream.censored += 1;
      if (as_strings) stream.strings.push_back(std::nullopt);
      continue;
    }
    if (as_strings)
      stream.strings.emplace_back(parse_bit_trace(j.get<std::string>()));
    else
      stream.trees.push_back(treerec::tree_from_json(j));
  }
  return stream;
}

int declared_termination(const std::string& why) {
  std::cerr << "terminated: " << why << "\n";
  return 2;
}

int run_generate(const std::string& shape_arg, const std::string& labels_arg, bool random_labels,
                 std::uint64_t seed) {
  const treerec::TreeShape shape = load_shape(shape_arg);
  const std::int64_t n = treerec::node_count(shape);
  treerec::Labels labels;
  if (!labels_arg.empty() && random_labels)
    throw std::invalid_argument("pass either --labels or --random-labels, not both");
  if (labels_arg.empty() && !random_labels)
    throw std::invalid_argument("one of --labels or --random-labels is required");
  if (random_labels) {
    treerec::Rng rng(seed);
    labels.resize(static_cast<std::size_t>(n));
    for (std::uint8_t& b : labels) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
  } else {
    labels = treerec::parse_labels(labels_arg, n);
  }
  std::cout << treerec::tree_to_json(treerec::build_tree(shape, labels)).dump() << "\n";
  return 0;
}

int run_corrupt(const std::string& shape_arg, const std::string& labels_arg,
                const std::string& model_arg, double q, double gamma, std::uint64_t seed,
                std::int64_t count) {
  const treerec::TreeShape shape = load_shape(shape_arg);
  const treerec::Model model = treerec::model_from_string(model_arg);
  const treerec::Labels labels = treerec::parse_labels(labels_arg, treerec::node_count(shape));
  const treerec::LabeledOrderedTree x = treerec::build_tree(shape, labels);
  if (count < 1) throw std::invalid_argument("--count must be >= 1");
  for (std::int64_t idx = 0; idx < count; ++idx) {
    treerec::Rng rng = treerec::Rng::stream(seed, static_cast<std::uint64_t>(idx));
    treerec::LabeledOrderedTree y = treerec::sample_trace(x, model, q, rng);
    if (gamma > 0.0) {
      const treerec::CensoredTrace kept = treerec::censor(y, gamma, rng);
      if (!kept.has_value()) {
        std::cout << "null\n";
        continue;
      }
      y = *kept;
    }
    std::cout << treerec::tree_to_json(y).dump() << "\n";
  }
  return 0;
}

int run_reconstruct(const std::string& model_arg, const std::string& algo,
                    const std::string& shape_arg, double q, std::int64_t m, std::uint64_t seed) {
  const bool is_string = model_arg == "string";
  const TraceStream stream = read_traces(std::cin, is_string);
  const treerec::StringReconstructor inner = treerec::exhaustive_string_reconstructor();

  if (is_string) {
    if (m < 1) throw std::invalid_argument("--m (source length) is required for --model string");
    try {
      const treerec::Labels rec =
          treerec::censored_reconstruct(stream.strings, m, q, 0.0, inner);
      std::cout << treerec::labels_to_bit_string(rec) << "\n";
      return 0;
    } catch (const treerec::AllTracesCensored&) {
      return declared_termination("every trace in the stream was censored");
    }
  }

  if (shape_arg.empty()) throw std::invalid_argument("--shape is required for tree models");
  const treerec::TreeShape shape = load_shape(shape_arg);
  if (stream.trees.empty())
    return declared_termination("no traces on stdin (censored lines are dropped)");

  if (model_arg == "ted" || model_arg == "lp") {
    const auto* ks = std::get_if<treerec::KaryShape>(&shape);
    if (ks == nullptr) throw std::invalid_argument("--model " + model_arg + " needs a k-ary shape");
    if (model_arg == "ted" && algo == "large") {
      const auto r = treerec::reconstruct_ted_large(stream.trees, *ks, q, inner);
      if (!r.ok)
        return declared_termination("no trace witnessed depth-(d-1) position " +
                                    std::to_string(r.empty_bucket));
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    if (model_arg == "ted" && algo == "small") {
      const auto r = treerec::reconstruct_ted_small(stream.trees, *ks, q);
      if (!r.ok)
        return declared_termination("no stable trace for anchor " +
                                    std::to_string(r.failed_anchor));
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    if (model_arg == "lp" && algo == "large") {
      const auto r = treerec::reconstruct_lp_large(stream.trees, *ks, q, inner);
      if (!r.ok)
        return declared_termination("trace " + std::to_string(r.bad_trace) +
                                    " has an undefined route at node " +
                                    std::to_string(r.bad_route));
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    if (model_arg == "lp" && algo == "small") {
      const auto r = treerec::reconstruct_lp_small(stream.trees, *ks);
      if (!r.ok)
        return declared_termination("no trace with a defined route for anchor " +
                                    std::to_string(r.failed_anchor));
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    throw std::invalid_argument("--model " + model_arg + " supports --algo large|small");
  }

  if (model_arg == "spider") {
    const auto* sp = std::get_if<treerec::SpiderShape>(&shape);
    if (sp == nullptr) throw std::invalid_argument("--model spider needs a spider shape");
    if (algo == "meanbased") {
      treerec::Rng rng(seed);
      const auto r = treerec::reconstruct_spider_meanbased(stream.trees, *sp, q, rng);
      if (r.random_fallback) std::cerr << "note: no best match; output drawn at random\n";
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    if (algo == "largedepth") {
      const auto r = treerec::reconstruct_spider_large_depth(stream.trees, *sp, q, inner);
      if (!r.ok) return declared_termination("no trace retained a node from every path");
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    if (algo == "rows") {
      const auto r = treerec::reconstruct_spider_rows(stream.trees, *sp, q, inner);
      std::cout << treerec::labels_to_bit_string(r.labels) << "\n";
      return 0;
    }
    throw std::invalid_argument("--model spider supports --algo meanbased|largedepth|rows");
  }

  throw std::invalid_argument("unknown model '" + model_arg + "'");
}

int run_experiment_cmd(const std::string& config_path, const std::string& csv_path,
                       const std::string& summary_path) {
  const treerec::ExperimentConfig cfg =
      treerec::experiment_config_from_json(inline_or_file(config_path));
  const treerec::ExperimentReport report = treerec::run_experiment(cfg);
  if (csv_path.empty())
    std::cout << report.csv();
  else
    write_text(csv_path, report.csv());
  if (!summary_path.empty()) write_text(summary_path, report.json_summary());
  return 0;
}

int run_verify_bounds(const std::string& config_path, bool as_json) {
  const treerec::VerifyBoundsConfig cfg =
      config_path.empty() ? treerec::VerifyBoundsConfig{}
                          : treerec::verify_bounds_config_from_json(inline_or_file(config_path));
  const treerec::VerifyBoundsReport report = treerec::verify_bounds(cfg);
  std::cout << (as_json ? report.to_json() : report.to_text());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tree trace reconstruction toolkit"};
  app.set_version_flag("--version", std::string(treerec::kCodeVersion));
  app.require_subcommand(1);

  std::string shape_arg, labels_arg, model_arg, algo_arg, config_path, csv_path, summary_path;
  bool random_labels = false, bounds_json = false;
  double q = 0.0, gamma = 0.0;
  std::uint64_t seed = 0;
  std::int64_t count = 1, m = 0;

  CLI::App* gen = app.add_subcommand("generate", "Build a labeled tree and print its JSON");
  gen->add_option("--shape", shape_arg, "Shape JSON (inline or file)")->required();
  gen->add_option("--labels", labels_arg, "Labels as 0/1 string or 0x-hex");
  gen->add_flag("--random-labels", random_labels, "Draw labels from --seed");
  gen->add_option("--seed", seed, "RNG seed for --random-labels");

  CLI::App* cor = app.add_subcommand("corrupt", "Sample deletion-channel traces, one JSON per line");
  cor->add_option("--shape", shape_arg, "Shape JSON (inline or file)")->required();
  cor->add_option("--labels", labels_arg, "Labels as 0/1 string or 0x-hex")->required();
  cor->add_option("--model", model_arg, "ted | lp")->default_val("ted");
  cor->add_option("--q", q, "Per-node deletion probability")->required();
  cor->add_option("--gamma", gamma, "Censoring probability (null line when censored)");
  cor->add_option("--seed", seed, "Master seed; trace t uses stream seed^t");
  cor->add_option("--count", count, "Number of traces")->default_val(1);

  CLI::App* rec = app.add_subcommand(
      "reconstruct", "Reconstruct labels from JSON-line traces on stdin; prints a bit string");
  rec->add_option("--model", model_arg, "ted | lp | spider | string")->required();
  rec->add_option("--algo", algo_arg,
                  "ted/lp: large|small; spider: meanbased|largedepth|rows");
  rec->add_option("--shape", shape_arg, "Shape JSON (inline or file); tree models only");
  rec->add_option("--q", q, "Per-node deletion probability")->required();
  rec->add_option("--m", m, "Source length; --model string only");
  rec->add_option("--seed", seed, "Seed for algorithm-internal fallback draws");

  CLI::App* exp = app.add_subcommand("experiment", "Run a seeded success-rate experiment");
  exp->add_option("--config", config_path, "Experiment config JSON (inline or file)")->required();
  exp->add_option("--csv", csv_path, "Write the per-cell CSV here (default: stdout)");
  exp->add_option("--summary", summary_path, "Write the JSON summary here");

  CLI::App* vb = app.add_subcommand("verify-bounds", "Check the analytic inequality families");
  vb->add_option("--config", config_path, "Grid config JSON (inline or file; default grids)");
  vb->add_flag("--json", bounds_json, "Emit the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors always exit 1
  }

  try {
    if (gen->parsed()) return run_generate(shape_arg, labels_arg, random_labels, seed);
    if (cor->parsed()) return run_corrupt(shape_arg, labels_arg, model_arg, q, gamma, seed, count);
    if (rec->parsed()) return run_reconstruct(model_arg, algo_arg, shape_arg, q, m, seed);
    if (exp->parsed()) return run_experiment_cmd(config_path, csv_path, summary_path);
    if (vb->parsed()) return run_verify_bounds(config_path, bounds_json);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
