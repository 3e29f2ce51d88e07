#include "treerec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "json.hpp"
#include "treerec/json_io.hpp"
#include "treerec/lp_recon.hpp"
#include "treerec/rng.hpp"
#include "treerec/spider_recon.hpp"
#include "treerec/ted_recon.hpp"

namespace treerec {
namespace {

using nlohmann::json;

double constant_or(const std::map<std::string, double>& constants, const std::string& key,
                   double fallback) {
  const auto it = constants.find(key);
  return it == constants.end() ? fallback : it->second;
}

std::int64_t ceil_at_least_one(double t) {
  if (!(t > 0.0)) return 1;
  const double c = std::ceil(t);
  if (c >= 9.0e18) throw std::invalid_argument("trace count formula overflowed");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(c));
}

}  // namespace

// --- trace budgets -----------------------------------------------------------

std::optional<std::int64_t> StringBudgetTable::lookup(std::int64_t d, double q) const {
  for (const Entry& e : entries)
    if (e.d == d && std::abs(e.q - q) <= 1e-9) return e.T;
  return std::nullopt;
}

StringBudgetTable string_budgets_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw std::invalid_argument("string budget table: expected {\"entries\": [...]}");
  StringBudgetTable table;
  for (const json& e : j["entries"]) {
    StringBudgetTable::Entry entry;
    entry.d = e.at("d").get<std::int64_t>();
    entry.q = e.at("q").get<double>();
    entry.T = e.at("T").get<std::int64_t>();
    if (entry.d < 1 || entry.T < 1 || !(entry.q >= 0.0 && entry.q < 1.0))
      throw std::invalid_argument("string budget table: entry out of range");
    table.entries.push_back(entry);
  }
  return table;
}

StringBudgetTable load_string_budgets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open budget table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return string_budgets_from_json(buf.str());
}

std::int64_t theorem_trace_count(const std::string& id, const TreeShape& shape, double q,
                                 const std::map<std::string, double>& constants,
                                 const StringBudgetTable& table) {
  validate(shape);
  if (!(q >= 0.0 && q < 1.0))
    throw std::invalid_argument("theorem_trace_count: q must lie in [0, 1)");
  const double n = static_cast<double>(node_count(shape));

  if (id == "ted_small" || id == "lp_small") {
    const auto* ks = std::get_if<KaryShape>(&shape);
    if (ks == nullptr)
      throw std::invalid_argument("theorem_trace_count: " + id + " needs a k-ary shape");
    const double C = constant_or(constants, "C", 1.0);
    const double k = static_cast<double>(ks->k);
    const double d = static_cast<double>(ks->d);
    double exponent = 0.0;
    if (id == "ted_small") {
      const double s = static_cast<double>(stability_radius(*ks, q));
      exponent = d * k + s * s * k;
    } else {
      exponent = d + constant_or(constants, "c_prime", 1.0) * k;
    }
    return ceil_at_least_one(C * std::log(n) * std::pow(1.0 - q, -exponent));
  }

  if (id == "spider_meanbased") {
    const auto* sp = std::get_if<SpiderShape>(&shape);
    if (sp == nullptr)
      throw std::invalid_argument("theorem_trace_count: spider_meanbased needs a spider shape");
    const double c = constant_or(constants, "c", 1.0);
    const double t =
        std::exp(c * static_cast<double>(sp->d) * std::cbrt(n * std::pow(q, sp->d)));
    return std::min<std::int64_t>(ceil_at_least_one(t), 100000000);
  }

  if (id == "spider_large_depth") {
    const auto* sp = std::get_if<SpiderShape>(&shape);
    if (sp == nullptr)
      throw std::invalid_argument("theorem_trace_count: spider_large_depth needs a spider shape");
    const auto budget = table.lookup(sp->d, q);
    if (!budget.has_value())
      throw std::invalid_argument("theorem_trace_count: no committed budget for (d=" +
                                  std::to_string(sp->d) + ", q=" + std::to_string(q) + ")");
    return 2 * *budget;
  }

  throw std::invalid_argument("theorem_trace_count: unknown id '" + id + "'");
}

// --- experiment config --------------------------------------------------------

LabelMode label_mode_from_string(const std::string& name) {
  if (name == "worst_case_enumerate") return LabelMode::worst_case_enumerate;
  if (name == "random") return LabelMode::random;
  if (name == "fixed") return LabelMode::fixed;
  throw std::invalid_argument("unknown label mode '" + name + "'");
}

std::string label_mode_to_string(LabelMode m) {
  switch (m) {
    case LabelMode::worst_case_enumerate: return "worst_case_enumerate";
    case LabelMode::random: return "random";
    case LabelMode::fixed: return "fixed";
  }
  throw std::logic_error("bad label mode");
}

namespace {

bool algo_needs_kary(const std::string& algo) {
  return algo == "ted_large" || algo == "ted_small" || algo == "lp_large" || algo == "lp_small";
}

bool algo_needs_spider(const std::string& algo) {
  return algo == "spider_meanbased" || algo == "spider_large_depth" || algo == "spider_rows";
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  validate(cfg.shape);
  if (!(cfg.q >= 0.0 && cfg.q < 1.0))
    throw std::invalid_argument("experiment: q must lie in [0, 1)");
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
    throw std::invalid_argument("experiment: gamma must lie in [0, 1)");
  if (cfg.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (cfg.trace_counts.empty()) throw std::invalid_argument("experiment: trace_counts is empty");
  for (const std::int64_t t : cfg.trace_counts)
    if (t < 1) throw std::invalid_argument("experiment: every trace count must be >= 1");
  if (cfg.threads < 0) throw std::invalid_argument("experiment: threads must be >= 0");

  if (!algo_needs_kary(cfg.algo) && !algo_needs_spider(cfg.algo))
    throw std::invalid_argument("experiment: unknown algorithm '" + cfg.algo + "'");
  if (algo_needs_kary(cfg.algo) && !std::holds_alternative<KaryShape>(cfg.shape))
    throw std::invalid_argument("experiment: algorithm '" + cfg.algo + "' needs a k-ary shape");
  if (algo_needs_spider(cfg.algo) && !std::holds_alternative<SpiderShape>(cfg.shape))
    throw std::invalid_argument("experiment: algorithm '" + cfg.algo + "' needs a spider shape");
  if (const auto* ks = std::get_if<KaryShape>(&cfg.shape); ks != nullptr && ks->d < 2)
    throw std::invalid_argument("experiment: k-ary algorithms need depth >= 2");
  if (cfg.algo == "spider_meanbased" && node_count(cfg.shape) > 16)
    throw std::invalid_argument("experiment: spider_meanbased enumerates candidates; n <= 16");

  const std::int64_t n = node_count(cfg.shape);
  if (cfg.label_mode == LabelMode::fixed) {
    if (static_cast<std::int64_t>(cfg.fixed_labels.size()) != n)
      throw std::invalid_argument("experiment: fixed_labels length must equal node count");
    for (const std::uint8_t b : cfg.fixed_labels)
      if (b > 1) throw std::invalid_argument("experiment: fixed_labels must be 0/1");
  }
  if (cfg.label_mode == LabelMode::worst_case_enumerate && n > 24)
    throw std::invalid_argument("experiment: worst_case_enumerate supports n <= 24");
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("experiment config: expected a JSON object");
  ExperimentConfig cfg;
  cfg.shape = shape_from_json(j.at("shape"));
  cfg.model = model_from_string(j.value("model", "ted"));
  cfg.algo = j.at("algo").get<std::string>();
  cfg.q = j.at("q").get<double>();
  cfg.gamma = j.value("gamma", 0.0);
  cfg.trace_counts = j.at("trace_counts").get<std::vector<std::int64_t>>();
  cfg.trials = j.value("trials", std::int64_t{1});
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  if (j.contains("constants")) {
    if (!j["constants"].is_object())
      throw std::invalid_argument("experiment config: constants must be an object");
    for (const auto& [key, value] : j["constants"].items())
      cfg.constants[key] = value.get<double>();
  }
  cfg.label_mode = label_mode_from_string(j.value("label_mode", "random"));
  if (j.contains("fixed_labels"))
    cfg.fixed_labels = parse_labels(j["fixed_labels"].get<std::string>(),
                                    node_count(cfg.shape));
  cfg.threads = j.value("threads", std::int64_t{0});
  validate(cfg);
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["shape"] = shape_to_json(cfg.shape);
  j["model"] = model_to_string(cfg.model);
  j["algo"] = cfg.algo;
  j["q"] = cfg.q;
  j["gamma"] = cfg.gamma;
  j["trace_counts"] = cfg.trace_counts;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["constants"] = json::object();
  for (const auto& [key, value] : cfg.constants) j["constants"][key] = value;
  j["label_mode"] = label_mode_to_string(cfg.label_mode);
  if (!cfg.fixed_labels.empty()) j["fixed_labels"] = labels_to_bit_string(cfg.fixed_labels);
  j["threads"] = cfg.threads;
  return j.dump(2);
}

// --- experiment execution -----------------------------------------------------

std::uint64_t cell_seed(std::uint64_t master_seed, std::int64_t t_index, std::int64_t trial) {
  const std::uint64_t key = (static_cast<std::uint64_t>(t_index) << 32) ^
                            (static_cast<std::uint64_t>(trial) & 0xFFFFFFFFull);
  return Rng::hash(Rng::hash(master_seed + 0x633D2C0A5EF0F1D1ull) ^ key);
}

namespace {

Labels trial_labels(const ExperimentConfig& cfg, std::int64_t trial, Rng& label_rng) {
  const std::int64_t n = node_count(cfg.shape);
  Labels truth;
  switch (cfg.label_mode) {
    case LabelMode::fixed:
      truth = cfg.fixed_labels;
      break;
    case LabelMode::random:
      truth.resize(static_cast<std::size_t>(n));
      for (std::uint8_t& b : truth) b = static_cast<std::uint8_t>(label_rng.next_u64() & 1);
      break;
    case LabelMode::worst_case_enumerate: {
      const std::uint64_t count = 1ull << n;  // n <= 24 validated
      const std::uint64_t which = static_cast<std::uint64_t>(trial) % count;
      truth.resize(static_cast<std::size_t>(n));
      for (std::int64_t t = 0; t < n; ++t)
        truth[static_cast<std::size_t>(t)] =
            static_cast<std::uint8_t>((which >> (n - 1 - t)) & 1);
      break;
    }
  }
  return truth;
}

bool run_cell(const ExperimentConfig& cfg, std::int64_t T, std::int64_t t_index,
              std::int64_t trial, const StringReconstructor& inner) {
  const std::uint64_t seed = cell_seed(cfg.master_seed, t_index, trial);
  Rng label_rng = Rng::stream(seed, 0);
  const Labels truth = trial_labels(cfg, trial, label_rng);
  const LabeledOrderedTree x = build_tree(cfg.shape, truth);

  std::vector<LabeledOrderedTree> traces;
  traces.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 0; t < T; ++t) {
    Rng tr = Rng::stream(seed, 1 + static_cast<std::uint64_t>(t));
    LabeledOrderedTree y = sample_trace(x, cfg.model, cfg.q, tr);
    if (cfg.gamma > 0.0) {
      CensoredTrace kept = censor(y, cfg.gamma, tr);
      if (!kept.has_value()) continue;
      traces.push_back(std::move(*kept));
    } else {
      traces.push_back(std::move(y));
    }
  }
  if (traces.empty()) return false;  // the entire budget was censored away

  if (cfg.algo == "ted_large") {
    const auto r = reconstruct_ted_large(traces, std::get<KaryShape>(cfg.shape), cfg.q, inner);
    return r.ok && r.labels == truth;
  }
  if (cfg.algo == "ted_small") {
    const auto r = reconstruct_ted_small(traces, std::get<KaryShape>(cfg.shape), cfg.q);
    return r.ok && r.labels == truth;
  }
  if (cfg.algo == "lp_large") {
    const auto r = reconstruct_lp_large(traces, std::get<KaryShape>(cfg.shape), cfg.q, inner);
    return r.ok && r.labels == truth;
  }
  if (cfg.algo == "lp_small") {
    const auto r = reconstruct_lp_small(traces, std::get<KaryShape>(cfg.shape));
    return r.ok && r.labels == truth;
  }
  if (cfg.algo == "spider_meanbased") {
    Rng fallback = Rng::stream(seed, static_cast<std::uint64_t>(T) + 1);
    const auto r =
        reconstruct_spider_meanbased(traces, std::get<SpiderShape>(cfg.shape), cfg.q, fallback);
    return r.labels == truth;
  }
  if (cfg.algo == "spider_large_depth") {
    const auto r =
        reconstruct_spider_large_depth(traces, std::get<SpiderShape>(cfg.shape), cfg.q, inner);
    return r.ok && r.labels == truth;
  }
  if (cfg.algo == "spider_rows") {
    const auto r = reconstruct_spider_rows(traces, std::get<SpiderShape>(cfg.shape), cfg.q, inner);
    return r.labels == truth;
  }
  throw std::logic_error("run_cell: unhandled algorithm");  // validate() screens ids
}

}  // namespace

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes out of range");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double radius = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, (center - radius) / denom), std::min(1.0, (center + radius) / denom)};
}

std::vector<AggregateRow> aggregate(const std::vector<CellResult>& cells) {
  std::vector<AggregateRow> rows;
  for (const CellResult& c : cells) {
    AggregateRow* row = nullptr;
    for (AggregateRow& r : rows)
      if (r.T == c.T) {
        row = &r;
        break;
      }
    if (row == nullptr) {
      rows.push_back(AggregateRow{c.T, 0, 0, 0.0, {}});
      row = &rows.back();
    }
    row->trials += 1;
    row->successes += c.success ? 1 : 0;
  }
  for (AggregateRow& r : rows) {
    r.rate = static_cast<double>(r.successes) / static_cast<double>(r.trials);
    r.wilson = wilson_interval(r.successes, r.trials);
  }
  return rows;
}

std::vector<CellResult> cells_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("cells_from_csv: empty input");
  bool with_millis = false;
  if (line == "T,trial,success,millis")
    with_millis = true;
  else if (line != "T,trial,success")
    throw std::invalid_argument("cells_from_csv: unrecognized header '" + line + "'");

  std::vector<CellResult> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    CellResult c;
    if (!std::getline(row, field, ',')) throw std::invalid_argument("cells_from_csv: bad row");
    c.T = std::stoll(field);
    if (!std::getline(row, field, ',')) throw std::invalid_argument("cells_from_csv: bad row");
    c.trial = std::stoll(field);
    if (!std::getline(row, field, ',')) throw std::invalid_argument("cells_from_csv: bad row");
    if (field != "0" && field != "1")
      throw std::invalid_argument("cells_from_csv: success must be 0 or 1");
    c.success = field == "1";
    if (with_millis) {
      if (!std::getline(row, field, ',')) throw std::invalid_argument("cells_from_csv: bad row");
      c.millis = std::stod(field);
    }
    cells.push_back(c);
  }
  return cells;
}

std::string ExperimentReport::csv() const {
  std::string out = "T,trial,success,millis\n";
  char buf[64];
  for (const CellResult& c : cells) {
    std::snprintf(buf, sizeof(buf), "%.3f", c.millis);
    out += std::to_string(c.T) + "," + std::to_string(c.trial) + "," + (c.success ? "1" : "0") +
           "," + buf + "\n";
  }
  return out;
}

std::string ExperimentReport::csv_body() const {
  std::string out = "T,trial,success\n";
  for (const CellResult& c : cells)
    out += std::to_string(c.T) + "," + std::to_string(c.trial) + "," + (c.success ? "1" : "0") +
           "\n";
  return out;
}

std::string ExperimentReport::json_summary() const {
  json j;
  j["code_version"] = code_version;
  j["config"] = json::parse(experiment_config_to_json(config));
  j["aggregates"] = json::array();
  for (const AggregateRow& r : aggregates) {
    json row;
    row["T"] = r.T;
    row["successes"] = r.successes;
    row["trials"] = r.trials;
    row["rate"] = r.rate;
    row["wilson_lo"] = r.wilson.lo;
    row["wilson_hi"] = r.wilson.hi;
    j["aggregates"].push_back(row);
  }
  return j.dump(2);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const StringReconstructor inner = exhaustive_string_reconstructor();

  struct Key {
    std::int64_t t_index;
    std::int64_t trial;
  };
  std::vector<Key> keys;
  keys.reserve(cfg.trace_counts.size() * static_cast<std::size_t>(cfg.trials));
  for (std::size_t ti = 0; ti < cfg.trace_counts.size(); ++ti)
    for (std::int64_t trial = 0; trial < cfg.trials; ++trial)
      keys.push_back(Key{static_cast<std::int64_t>(ti), trial});

  std::vector<CellResult> cells(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= keys.size()) return;
      const Key key = keys[idx];
      const std::int64_t T = cfg.trace_counts[static_cast<std::size_t>(key.t_index)];
      const auto t0 = std::chrono::steady_clock::now();
      bool success = false;
      try {
        success = run_cell(cfg, T, key.t_index, key.trial, inner);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
      const auto t1 = std::chrono::steady_clock::now();
      const double millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
      cells[idx] = CellResult{T, key.trial, success, millis};
    }
  };

  unsigned hardware = std::thread::hardware_concurrency();
  if (hardware == 0) hardware = 1;
  std::int64_t want = cfg.threads > 0 ? cfg.threads : static_cast<std::int64_t>(hardware);
  want = std::clamp<std::int64_t>(want, 1, static_cast<std::int64_t>(keys.size()));

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(want - 1));
  for (std::int64_t i = 1; i < want; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  for (const std::exception_ptr& e : errors)  // lowest cell index wins: deterministic
    if (e) std::rethrow_exception(e);

  ExperimentReport report;
  report.config = cfg;
  report.cells = std::move(cells);
  report.aggregates = aggregate(report.cells);
  return report;
}

// --- bound verification ---------------------------------------------------------

void validate(const VerifyBoundsConfig& cfg) {
  if (cfg.n < 2 || cfg.n > 64)
    throw std::invalid_argument("verify_bounds: n must lie in [2, 64]");
  if (cfg.depths.empty() || cfg.q_general.empty() || cfg.q_small.empty() || cfg.L.empty())
    throw std::invalid_argument("verify_bounds: empty grid axis");
  for (const std::int64_t d : cfg.depths)
    if (d < 20) throw std::invalid_argument("verify_bounds: anchor analysis assumes depth >= 20");
  for (const double q : cfg.q_general)
    if (!(q > 0.0 && q < 0.7))
      throw std::invalid_argument("verify_bounds: q_general values must lie in (0, 0.7)");
  for (const double q : cfg.q_small)
    if (!(q > 0.0 && q < 0.5))
      throw std::invalid_argument("verify_bounds: q_small values must lie in (0, 0.5)");
  for (const std::int64_t L : cfg.L)
    if (L < 20) throw std::invalid_argument("verify_bounds: arc parameter L must be >= 20");
  if (cfg.grid_points < 2) throw std::invalid_argument("verify_bounds: grid_points must be >= 2");
  if (cfg.label_vectors < 1)
    throw std::invalid_argument("verify_bounds: label_vectors must be >= 1");
}

VerifyBoundsConfig verify_bounds_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("verify-bounds config: expected a JSON object");
  VerifyBoundsConfig cfg;
  cfg.n = j.value("n", cfg.n);
  if (j.contains("depths")) cfg.depths = j["depths"].get<std::vector<std::int64_t>>();
  if (j.contains("q_general")) cfg.q_general = j["q_general"].get<std::vector<double>>();
  if (j.contains("q_small")) cfg.q_small = j["q_small"].get<std::vector<double>>();
  if (j.contains("L")) cfg.L = j["L"].get<std::vector<std::int64_t>>();
  cfg.grid_points = j.value("grid_points", cfg.grid_points);
  cfg.label_vectors = j.value("label_vectors", cfg.label_vectors);
  cfg.seed = j.value("seed", cfg.seed);
  validate(cfg);
  return cfg;
}

std::int64_t VerifyBoundsReport::total_violations() const {
  std::int64_t total = 0;
  for (const BoundFamilyReport& f : families) total += f.violations;
  return total;
}

std::string VerifyBoundsReport::to_text() const {
  std::string out;
  char buf[160];
  for (const BoundFamilyReport& f : families) {
    std::snprintf(buf, sizeof(buf), "%-22s points=%-9lld violations=%-6lld min_margin=%.6e\n",
                  f.id.c_str(), static_cast<long long>(f.points),
                  static_cast<long long>(f.violations), f.min_margin);
    out += buf;
  }
  return out;
}

std::string VerifyBoundsReport::to_json() const {
  json j;
  j["families"] = json::array();
  for (const BoundFamilyReport& f : families) {
    json row;
    row["id"] = f.id;
    row["points"] = f.points;
    row["violations"] = f.violations;
    row["min_margin"] = f.min_margin;
    j["families"].push_back(row);
  }
  j["total_violations"] = total_violations();
  return j.dump(2);
}

namespace {

constexpr double kPi = std::numbers::pi;

// Differences of two distinct random 0/1 labelings: entries in {-1, 0, 1},
// never all zero, so the factored generating function is always defined.
std::vector<std::vector<double>> difference_vectors(std::int64_t n, std::int64_t count,
                                                    std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  while (static_cast<std::int64_t>(out.size()) < count) {
    std::vector<double> a(static_cast<std::size_t>(n));
    bool nonzero = false;
    for (double& v : a) {
      const int x1 = static_cast<int>(rng.next_u64() & 1);
      const int x2 = static_cast<int>(rng.next_u64() & 1);
      v = static_cast<double>(x1 - x2);
      nonzero = nonzero || x1 != x2;
    }
    if (nonzero) out.push_back(std::move(a));
  }
  return out;
}

struct FamilyAccumulator {
  BoundFamilyReport report;
  explicit FamilyAccumulator(std::string id) {
    report.id = std::move(id);
    report.min_margin = std::numeric_limits<double>::infinity();
  }
  void tally(double margin, bool violated) {
    report.points += 1;
    report.violations += violated ? 1 : 0;
    report.min_margin = std::min(report.min_margin, margin);
  }
};

// |(1-q^d)w^d + q^d| >= exp(-2 pi^2 q^d (1-q^d) d^2 / L^2) on the arc.
BoundFamilyReport check_unit_arc_floor(const VerifyBoundsConfig& cfg) {
  FamilyAccumulator acc("unit_arc_floor");
  for (const double q : cfg.q_general)
    for (const std::int64_t d : cfg.depths)
      for (const std::int64_t L : cfg.L) {
        const double qd = std::pow(q, static_cast<double>(d));
        const double rhs = std::exp(-2.0 * kPi * kPi * qd * (1.0 - qd) *
                                    static_cast<double>(d * d) / static_cast<double>(L * L));
        for (std::int64_t g = 0; g < cfg.grid_points; ++g) {
          const double theta = -kPi / static_cast<double>(L) +
                               (2.0 * kPi / static_cast<double>(L)) * static_cast<double>(g) /
                                   static_cast<double>(cfg.grid_points - 1);
          const double lhs =
              std::abs((1.0 - qd) * std::polar(1.0, theta * static_cast<double>(d)) + qd);
          acc.tally(lhs - rhs, lhs < rhs - 1e-12);
        }
      }
  return acc.report;
}

// |A~(w0)| >= (1-q) (1-2a)/(1-a) a^{l* mod d} at the parity-chosen anchor.
BoundFamilyReport check_anchor_point_floor(const VerifyBoundsConfig& cfg,
                                           const std::vector<std::vector<double>>& vectors) {
  FamilyAccumulator acc("anchor_point_floor");
  for (const double q : cfg.q_general)
    for (const std::int64_t d : cfg.depths) {
      const std::complex<double> w0 =
          (d % 2 == 1) ? std::complex<double>(-q, 0.0)
                       : std::polar(q, kPi * static_cast<double>(d - 1) / static_cast<double>(d));
      const double alpha = std::abs(std::complex<double>(q, 0.0) + (1.0 - q) * w0);
      if (!(alpha < 0.5))
        throw std::logic_error("anchor_point_floor: anchor modulus left the contraction regime");
      for (const std::vector<double>& a : vectors) {
        const GeneratingValues gv = eval_generating_coeffs(a, d, q, w0);
        const double lhs = std::abs(*gv.a_tilde);
        const double rhs = (1.0 - q) * ((1.0 - 2.0 * alpha) / (1.0 - alpha)) *
                           std::pow(alpha, static_cast<double>(gv.ell_star % d));
        acc.tally(lhs - rhs, lhs < rhs * (1.0 - 1e-9));
      }
    }
  return acc.report;
}

// |A~(w)| <= 1/((1-q)(1-|w|)) inside the disc.
BoundFamilyReport check_disc_growth_ceiling(const VerifyBoundsConfig& cfg,
                                            const std::vector<std::vector<double>>& vectors) {
  FamilyAccumulator acc("disc_growth_ceiling");
  const std::int64_t radii = 25;
  const std::int64_t angles = std::max<std::int64_t>(1, cfg.grid_points / radii);
  for (const double q : cfg.q_general)
    for (const std::int64_t d : cfg.depths)
      for (const std::vector<double>& a : vectors)
        for (std::int64_t ri = 0; ri < radii; ++ri) {
          const double r = 0.96 * static_cast<double>(ri) / static_cast<double>(radii - 1);
          const double rhs = 1.0 / ((1.0 - q) * (1.0 - r));
          for (std::int64_t ai = 0; ai < angles; ++ai) {
            const double phi =
                2.0 * kPi * static_cast<double>(ai) / static_cast<double>(angles);
            const GeneratingValues gv = eval_generating_coeffs(a, d, q, std::polar(r, phi));
            const double lhs = std::abs(*gv.a_tilde);
            acc.tally(rhs - lhs, lhs > rhs * (1.0 + 1e-9));
          }
        }
  return acc.report;
}

// 1-|w| >= (theta-theta0)^4/64 along the shifted half-circle.
BoundFamilyReport check_arc_distance_quartic(const VerifyBoundsConfig& cfg) {
  FamilyAccumulator acc("arc_distance_quartic");
  for (const std::int64_t L : cfg.L) {
    const double cosl = std::cos(kPi / static_cast<double>(L));
    const double h = cosl - std::sqrt(cosl * cosl - 0.75) - 0.5;
    if (!(h > 0.0 && h <= 0.1 + 1e-12))
      throw std::logic_error("arc_distance_quartic: translate fell outside (0, 1/10]");
    const double c = 0.5 + h;
    const std::complex<double> x = std::polar(1.0, kPi / static_cast<double>(L));
    const double theta0 = std::arg(x - c);
    for (std::int64_t g = 0; g < cfg.grid_points; ++g) {
      const double theta = theta0 + (kPi / 2.0 - theta0) * static_cast<double>(g) /
                                        static_cast<double>(cfg.grid_points - 1);
      const std::complex<double> w = c + 0.5 * std::polar(1.0, theta);
      const double lhs = 1.0 - std::abs(w);
      const double rhs = std::pow(theta - theta0, 4.0) / 64.0;
      acc.tally(lhs - rhs, lhs < rhs - 1e-12);
    }
  }
  return acc.report;
}

// sup over the arc grid of |A~| >= (1-2q)^L q^{dL} n^{-L}, in log space.
BoundFamilyReport check_arc_sup_floor(const VerifyBoundsConfig& cfg,
                                      const std::vector<std::vector<double>>& vectors) {
  FamilyAccumulator acc("arc_sup_floor");
  for (const double q : cfg.q_small)
    for (const std::int64_t d : cfg.depths)
      for (const std::int64_t L : cfg.L) {
        const double rhs_log = static_cast<double>(L) * std::log(1.0 - 2.0 * q) +
                               static_cast<double>(d) * static_cast<double>(L) * std::log(q) -
                               static_cast<double>(L) * std::log(static_cast<double>(cfg.n));
        for (const std::vector<double>& a : vectors) {
          double sup_log = -std::numeric_limits<double>::infinity();
          for (std::int64_t g = 0; g < cfg.grid_points; ++g) {
            const double theta = -kPi / static_cast<double>(L) +
                                 (2.0 * kPi / static_cast<double>(L)) * static_cast<double>(g) /
                                     static_cast<double>(cfg.grid_points - 1);
            const GeneratingValues gv =
                eval_generating_coeffs(a, d, q, std::polar(1.0, theta));
            const double mod = std::abs(*gv.a_tilde);
            if (mod > 0.0) sup_log = std::max(sup_log, std::log(mod));
          }
          acc.tally(sup_log - rhs_log, sup_log < rhs_log);
        }
      }
  return acc.report;
}

}  // namespace

VerifyBoundsReport verify_bounds(const VerifyBoundsConfig& cfg) {
  validate(cfg);
  const std::vector<std::vector<double>> vectors =
      difference_vectors(cfg.n, cfg.label_vectors, cfg.seed);
  VerifyBoundsReport report;
  report.families.push_back(check_unit_arc_floor(cfg));
  report.families.push_back(check_anchor_point_floor(cfg, vectors));
  report.families.push_back(check_disc_growth_ceiling(cfg, vectors));
  report.families.push_back(check_arc_distance_quartic(cfg));
  report.families.push_back(check_arc_sup_floor(cfg, vectors));
  return report;
}

}  // namespace treerec
