#pragma once
// Experiment orchestration: trace-budget formulas with tunable constants,
// seeded success-rate experiments over a grid of trace counts, numeric
// verification of the analytic inequalities behind the mean-based
// distinguisher, and CSV/JSON reporting.
//
// Determinism contract: a report's body (everything except wall-clock
// columns) is a pure function of the config. Every (trace count, trial) cell
// derives its own seed, trials fan out to worker threads, and aggregation is
// an ordered reduction, so thread count and scheduling never change output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treerec/channel.hpp"
#include "treerec/string_recon.hpp"
#include "treerec/tree.hpp"

namespace treerec {

inline constexpr const char* kCodeVersion = "treerec-0.1.0";

// --- trace budgets ----------------------------------------------------------

// Committed per-(d, q) string-reconstruction budgets, loaded from a JSON
// calibration file of the form {"entries": [{"d": 8, "q": 0.5, "T": 96}]}.
struct StringBudgetTable {
  struct Entry {
    std::int64_t d = 0;
    double q = 0.0;
    std::int64_t T = 0;
  };
  std::vector<Entry> entries;
  std::optional<std::int64_t> lookup(std::int64_t d, double q) const;
};
StringBudgetTable string_budgets_from_json(const std::string& text);
StringBudgetTable load_string_budgets(const std::string& path);

// Trace-count formulas. `id` selects the formula; `constants` supplies the
// tunable reals under keys c, c_prime, C, C_prime, epsilon (defaults 1, 1,
// 1, 1, 0.1). Logs are natural; n is the non-root node count.
//   ted_small           C log(n) (1-q)^{-(d k + s^2 k)},  s = stability_radius
//   lp_small            C log(n) (1-q)^{-(d + c_prime k)}
//   spider_meanbased    exp(c d (n q^d)^{1/3}), capped at 10^8
//   spider_large_depth  2 * committed budget for (d, q) from `table`
// The result is ceiled and floored at 1. Throws std::invalid_argument on an
// unknown id, a shape/formula mismatch, or a missing table entry.
std::int64_t theorem_trace_count(const std::string& id, const TreeShape& shape, double q,
                                 const std::map<std::string, double>& constants,
                                 const StringBudgetTable& table = {});

// --- experiments ------------------------------------------------------------

enum class LabelMode {
  worst_case_enumerate,  // trial t uses labeling number t mod 2^n (lexicographic)
  random,                // fresh labels per trial from the trial's stream
  fixed,                 // cfg.fixed_labels every trial
};
LabelMode label_mode_from_string(const std::string& name);
std::string label_mode_to_string(LabelMode m);

struct ExperimentConfig {
  TreeShape shape = KaryShape{2, 2};
  Model model = Model::ted;
  std::string algo;  // ted_large | ted_small | lp_large | lp_small |
                     // spider_meanbased | spider_large_depth | spider_rows
  double q = 0.0;
  double gamma = 0.0;  // per-trace censoring probability; censored traces are dropped
  std::vector<std::int64_t> trace_counts;
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::map<std::string, double> constants;
  LabelMode label_mode = LabelMode::random;
  Labels fixed_labels;       // used when label_mode == fixed
  std::int64_t threads = 0;  // worker count; 0 = hardware concurrency
};
void validate(const ExperimentConfig& cfg);  // throws std::invalid_argument

ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// Seed of the RNG stream family owned by one (trace-count position, trial)
// cell. Within the cell: stream 0 draws labels, streams 1..T drive the T
// traces (channel noise, then the censoring coin), stream T+1 serves
// algorithm-internal fallback draws.
std::uint64_t cell_seed(std::uint64_t master_seed, std::int64_t t_index, std::int64_t trial);

struct CellResult {
  std::int64_t T = 0;
  std::int64_t trial = 0;
  bool success = false;
  double millis = 0.0;  // wall clock; excluded from the determinism surface
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};
// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials);

struct AggregateRow {
  std::int64_t T = 0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double rate = 0.0;
  WilsonInterval wilson;
};
// Groups cells by T in first-appearance order and recomputes the rates.
std::vector<AggregateRow> aggregate(const std::vector<CellResult>& cells);

// Parses the output of csv() or csv_body() back into cells.
std::vector<CellResult> cells_from_csv(const std::string& text);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;  // ordered by (trace-count position, trial)
  std::vector<AggregateRow> aggregates;
  std::string code_version = kCodeVersion;

  std::string csv() const;       // columns: T,trial,success,millis
  std::string csv_body() const;  // columns: T,trial,success — determinism surface
  std::string json_summary() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// --- numeric verification of the distinguisher inequalities ------------------

struct VerifyBoundsConfig {
  std::int64_t n = 30;  // coefficient-vector length
  std::vector<std::int64_t> depths = {20, 21};
  std::vector<double> q_general = {0.10, 0.25, 0.40, 0.55, 0.65};  // must stay < 0.7
  std::vector<double> q_small = {0.05, 0.15, 0.25, 0.35, 0.45};    // must stay < 1/2
  std::vector<std::int64_t> L = {20, 40};                          // arc parameters, >= 20
  std::int64_t grid_points = 1000;
  std::int64_t label_vectors = 50;  // random labeling-difference vectors
  std::uint64_t seed = 0x74726565ull;
};
void validate(const VerifyBoundsConfig& cfg);  // hypothesis checks
VerifyBoundsConfig verify_bounds_config_from_json(const std::string& text);

struct BoundFamilyReport {
  std::string id;
  std::int64_t points = 0;      // inequality comparisons made
  std::int64_t violations = 0;  // comparisons that failed
  double min_margin = 0.0;      // smallest (satisfied side) slack seen
};

struct VerifyBoundsReport {
  std::vector<BoundFamilyReport> families;
  std::int64_t total_violations() const;
  std::string to_text() const;
  std::string to_json() const;
};

// Checks, at every grid point, the five inequality families the
// distinguisher analysis rests on:
//   unit_arc_floor       |(1-q^d)w^d + q^d| >= exp(-2 pi^2 q^d (1-q^d) d^2/L^2)
//                        on the arc |arg w| <= pi/L
//   anchor_point_floor   |A~(w0)| >= (1-q) (1-2a)/(1-a) a^{l* mod d} at the
//                        parity-chosen anchor w0, a = |q+(1-q)w0|
//   disc_growth_ceiling  |A~(w)| <= 1/((1-q)(1-|w|)) for |w| < 1
//   arc_distance_quartic 1-|w| >= (theta-theta0)^4/64 on the shifted circle
//   arc_sup_floor        sup over the arc grid of |A~| >= (1-2q)^L q^{dL} n^{-L}
//                        (compared in log space)
VerifyBoundsReport verify_bounds(const VerifyBoundsConfig& cfg);

}  // namespace treerec
