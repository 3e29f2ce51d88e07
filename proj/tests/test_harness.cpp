#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "treerec/harness.hpp"
#include "treerec/rng.hpp"
#include "treerec/tree.hpp"

using namespace treerec;
using namespace treerec::testing;

namespace {

Labels pattern(std::int64_t n) {
  Labels l(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) l[static_cast<std::size_t>(i)] = (i * 5 + 1) % 3 < 1;
  return l;
}

StringBudgetTable table_d8() {
  return string_budgets_from_json(R"({"entries": [{"d": 8, "q": 0.5, "T": 48}]})");
}

}  // namespace

TEST_CASE("trace budget formulas: frozen reference values") {
  CHECK(theorem_trace_count("ted_small", KaryShape{2, 3}, 0.1, {{"C", 10.0}}) == 62);
  CHECK(theorem_trace_count("lp_small", KaryShape{2, 4}, 0.1,
                            {{"C", 10.0}, {"c_prime", 2.0}}) == 80);
  CHECK(theorem_trace_count("spider_meanbased", SpiderShape{9, 3}, 0.2, {{"c", 1.0}}) == 4);
  CHECK(theorem_trace_count("spider_large_depth", SpiderShape{16, 8}, 0.5, {}, table_d8()) == 96);

  // Independent recomputation of the two log-based formulas.
  {
    const double expect =
        10.0 * std::log(14.0) * std::pow(0.9, -(3.0 * 2 + 1.0 * 1.0 * 2));  // radius is 1
    CHECK(theorem_trace_count("ted_small", KaryShape{2, 3}, 0.1, {{"C", 10.0}}) ==
          static_cast<std::int64_t>(std::ceil(expect)));
  }
  {
    const double expect = 10.0 * std::log(30.0) * std::pow(0.9, -(4.0 + 2.0 * 2.0));
    CHECK(theorem_trace_count("lp_small", KaryShape{2, 4}, 0.1,
                              {{"C", 10.0}, {"c_prime", 2.0}}) ==
          static_cast<std::int64_t>(std::ceil(expect)));
  }
}

TEST_CASE("trace budget formulas: lossless floor, cap, defaults, lookup tolerance") {
  CHECK(theorem_trace_count("ted_small", KaryShape{2, 2}, 0.0, {{"C", 1.0}}) == 2);  // ceil(ln 6)
  CHECK(theorem_trace_count("spider_meanbased", SpiderShape{6, 2}, 0.0, {}) == 1);
  CHECK(theorem_trace_count("spider_meanbased", SpiderShape{16, 2}, 0.5, {{"c", 10.0}}) ==
        100000000);  // capped
  // Defaults: C = 1, c_prime = 1.
  CHECK(theorem_trace_count("lp_small", KaryShape{2, 2}, 0.0, {}) ==
        static_cast<std::int64_t>(std::ceil(std::log(6.0))));
  // Budget lookup tolerates tiny floating-point drift in q.
  CHECK(theorem_trace_count("spider_large_depth", SpiderShape{16, 8}, 0.5 + 5e-10, {},
                            table_d8()) == 96);
}

TEST_CASE("trace budget formulas: rejections") {
  CHECK_THROWS_AS(theorem_trace_count("nope", KaryShape{2, 2}, 0.1, {}), std::invalid_argument);
  CHECK_THROWS_AS(theorem_trace_count("ted_small", SpiderShape{6, 2}, 0.1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(theorem_trace_count("spider_meanbased", KaryShape{2, 2}, 0.1, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(theorem_trace_count("spider_large_depth", SpiderShape{16, 8}, 0.25, {},
                                      table_d8()),
                  std::invalid_argument);  // no entry for that q
  CHECK_THROWS_AS(theorem_trace_count("ted_small", KaryShape{2, 2}, 1.0, {}),
                  std::invalid_argument);
}

TEST_CASE("budget tables parse strictly") {
  const auto t = table_d8();
  REQUIRE(t.entries.size() == 1);
  CHECK(t.lookup(8, 0.5).value() == 48);
  CHECK(!t.lookup(8, 0.4).has_value());
  CHECK(!t.lookup(7, 0.5).has_value());
  CHECK_THROWS_AS(string_budgets_from_json("[]"), std::invalid_argument);
  CHECK_THROWS_AS(string_budgets_from_json(R"({"entries": [{"d": 0, "q": 0.5, "T": 5}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(string_budgets_from_json(R"({"entries": [{"d": 2, "q": 1.0, "T": 5}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(string_budgets_from_json(R"({"entries": [{"d": 2, "q": 0.5, "T": 0}]})"),
                  std::invalid_argument);
}

TEST_CASE("Wilson intervals: reference value and edge cases") {
  const auto w = wilson_interval(8, 10);
  CHECK(w.lo == doctest::Approx(0.4901625).epsilon(1e-5));
  CHECK(w.hi == doctest::Approx(0.9433178).epsilon(1e-5));
  CHECK(wilson_interval(0, 5).lo == doctest::Approx(0.0));
  CHECK(wilson_interval(5, 5).hi == doctest::Approx(1.0));
  const auto z = wilson_interval(0, 5);
  const auto f = wilson_interval(5, 5);
  CHECK(z.hi == doctest::Approx(1.0 - f.lo).epsilon(1e-12));  // symmetry
  CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(6, 5), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(-1, 5), std::invalid_argument);
}

TEST_CASE("cell seeds and their streams do not collide on a grid") {
  std::set<std::uint64_t> seeds;
  std::set<std::uint64_t> first_draws;
  for (std::int64_t ti = 0; ti < 10; ++ti)
    for (std::int64_t trial = 0; trial < 100; ++trial) {
      const auto seed = cell_seed(1234, ti, trial);
      seeds.insert(seed);
      first_draws.insert(Rng::stream(seed, 0).next_u64());
      first_draws.insert(Rng::stream(seed, 1).next_u64());
    }
  CHECK(seeds.size() == 1000);
  CHECK(first_draws.size() == 2000);
  CHECK(cell_seed(1, 0, 0) != cell_seed(2, 0, 0));
  CHECK(cell_seed(1, 0, 1) != cell_seed(1, 1, 0));
}

TEST_CASE("aggregation groups by trace count in first-appearance order") {
  std::vector<CellResult> cells{
      {20, 0, true, 1.0}, {20, 1, false, 1.0}, {10, 0, true, 1.0},
      {20, 2, true, 1.0}, {10, 1, true, 1.0},
  };
  const auto rows = aggregate(cells);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].T == 20);
  CHECK(rows[0].successes == 2);
  CHECK(rows[0].trials == 3);
  CHECK(rows[0].rate == doctest::Approx(2.0 / 3));
  CHECK(rows[1].T == 10);
  CHECK(rows[1].trials == 2);
  CHECK(rows[1].rate == doctest::Approx(1.0));
  const auto w = wilson_interval(2, 3);
  CHECK(rows[0].wilson.lo == doctest::Approx(w.lo));
  CHECK(rows[0].wilson.hi == doctest::Approx(w.hi));
}

TEST_CASE("CSV round-trips, with and without wall-clock columns") {
  ExperimentReport rep;
  rep.cells = {{5, 0, true, 3.25}, {5, 1, false, 0.125}, {9, 0, true, 12.0}};
  const auto from_full = cells_from_csv(rep.csv());
  const auto from_body = cells_from_csv(rep.csv_body());
  REQUIRE(from_full.size() == 3);
  REQUIRE(from_body.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(from_full[i].T == rep.cells[i].T);
    CHECK(from_full[i].trial == rep.cells[i].trial);
    CHECK(from_full[i].success == rep.cells[i].success);
    CHECK(from_full[i].millis == doctest::Approx(rep.cells[i].millis).epsilon(1e-3));
    CHECK(from_body[i].millis == 0.0);
  }
  CHECK(rep.csv_body().find("millis") == std::string::npos);
  CHECK_THROWS_AS(cells_from_csv("bogus,header\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(cells_from_csv("T,trial,success\n1,0,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(cells_from_csv(""), std::invalid_argument);
}

TEST_CASE("experiment reports are reproducible and thread-count invariant") {
  ExperimentConfig cfg;
  cfg.shape = KaryShape{2, 2};
  cfg.model = Model::ted;
  cfg.algo = "ted_small";
  cfg.q = 0.15;
  cfg.trace_counts = {4, 12};
  cfg.trials = 6;
  cfg.master_seed = 42;
  cfg.threads = 1;
  const auto r1 = run_experiment(cfg);
  const auto r2 = run_experiment(cfg);
  cfg.threads = 4;
  const auto r4 = run_experiment(cfg);
  CHECK(r1.csv_body() == r2.csv_body());
  CHECK(r1.csv_body() == r4.csv_body());
  // Summaries embed the config (whose threads field differs); the measured
  // aggregates must still be identical.
  const auto agg1 = nlohmann::json::parse(r1.json_summary()).at("aggregates");
  const auto agg4 = nlohmann::json::parse(r4.json_summary()).at("aggregates");
  CHECK(agg1 == agg4);

  // Cells arrive ordered by (trace-count position, trial).
  REQUIRE(r1.cells.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(r1.cells[i].T == (i < 6 ? 4 : 12));
    CHECK(r1.cells[i].trial == static_cast<std::int64_t>(i % 6));
  }

  // A different master seed reshuffles outcomes or at least the cell seeds.
  cfg.master_seed = 43;
  const auto r5 = run_experiment(cfg);
  CHECK(r5.cells.size() == r1.cells.size());
}

TEST_CASE("every algorithm reaches rate 1.0 on lossless traces") {
  struct Case {
    const char* algo;
    TreeShape shape;
    Model model;
  };
  const std::vector<Case> cases{
      {"ted_large", KaryShape{2, 2}, Model::ted},
      {"ted_small", KaryShape{2, 2}, Model::ted},
      {"lp_large", KaryShape{2, 2}, Model::lp},
      {"lp_small", KaryShape{2, 2}, Model::lp},
      {"spider_meanbased", SpiderShape{6, 2}, Model::ted},
      {"spider_large_depth", SpiderShape{8, 4}, Model::lp},
      {"spider_rows", SpiderShape{6, 2}, Model::ted},
  };
  for (const auto& c : cases) {
    ExperimentConfig cfg;
    cfg.shape = c.shape;
    cfg.model = c.model;
    cfg.algo = c.algo;
    cfg.q = 0.0;
    cfg.trace_counts = {2};
    cfg.trials = 3;
    cfg.master_seed = 7;
    cfg.threads = 2;
    const auto rep = run_experiment(cfg);
    REQUIRE(rep.aggregates.size() == 1);
    CHECK(rep.aggregates[0].rate == doctest::Approx(1.0));
  }
}

TEST_CASE("success rates respond to the trace budget") {
  ExperimentConfig cfg;
  cfg.shape = KaryShape{2, 3};
  cfg.model = Model::ted;
  cfg.algo = "ted_small";
  cfg.q = 0.15;
  cfg.trace_counts = {1, 40};
  cfg.trials = 20;
  cfg.master_seed = 11;
  const auto rep = run_experiment(cfg);
  REQUIRE(rep.aggregates.size() == 2);
  CHECK(rep.aggregates[0].rate < rep.aggregates[1].rate);
  CHECK(rep.aggregates[1].rate >= 0.9);
  // Aggregates re-derivable from the serialized cells.
  const auto redone = aggregate(cells_from_csv(rep.csv()));
  REQUIRE(redone.size() == 2);
  CHECK(redone[0].successes == rep.aggregates[0].successes);
  CHECK(redone[1].successes == rep.aggregates[1].successes);
}

TEST_CASE("label modes: fixed vector and exhaustive enumeration") {
  ExperimentConfig cfg;
  cfg.shape = SpiderShape{6, 2};
  cfg.model = Model::ted;
  cfg.algo = "spider_meanbased";
  cfg.q = 0.0;
  cfg.trace_counts = {1};
  cfg.trials = 2;
  cfg.master_seed = 3;
  cfg.label_mode = LabelMode::fixed;
  cfg.fixed_labels = pattern(6);
  CHECK(run_experiment(cfg).aggregates[0].rate == doctest::Approx(1.0));

  cfg.label_mode = LabelMode::worst_case_enumerate;
  cfg.fixed_labels.clear();
  cfg.trials = 64;  // covers all 2^6 labelings exactly once
  CHECK(run_experiment(cfg).aggregates[0].rate == doctest::Approx(1.0));
}

TEST_CASE("censoring drops traces but a surviving one still wins at q = 0") {
  ExperimentConfig cfg;
  cfg.shape = KaryShape{2, 2};
  cfg.model = Model::ted;
  cfg.algo = "ted_small";
  cfg.q = 0.0;
  cfg.gamma = 0.5;
  cfg.trace_counts = {12};
  cfg.trials = 20;
  cfg.master_seed = 17;
  const auto rep = run_experiment(cfg);
  CHECK(rep.aggregates[0].rate >= 0.95);
}

TEST_CASE("experiment validation rejects inconsistent configs") {
  ExperimentConfig good;
  good.shape = KaryShape{2, 2};
  good.algo = "ted_small";
  good.q = 0.1;
  good.trace_counts = {3};
  CHECK_NOTHROW(validate(good));

  auto bad = good;
  bad.q = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.trials = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.trace_counts = {};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.trace_counts = {0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.threads = -1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.algo = "mystery";
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.shape = SpiderShape{6, 2};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // kary algo, spider shape
  bad = good;
  bad.algo = "spider_meanbased";
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // spider algo, kary shape
  bad = good;
  bad.shape = KaryShape{4, 1};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // depth-1 k-ary
  bad = good;
  bad.shape = SpiderShape{18, 3};
  bad.algo = "spider_meanbased";
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // n > 16 for enumeration
  bad = good;
  bad.label_mode = LabelMode::fixed;
  bad.fixed_labels = Labels{1, 0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // wrong length
  bad = good;
  bad.shape = KaryShape{2, 4};  // n = 30
  bad.algo = "ted_small";
  bad.label_mode = LabelMode::worst_case_enumerate;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // n > 24
}

TEST_CASE("experiment configs survive a JSON round trip") {
  ExperimentConfig cfg;
  cfg.shape = SpiderShape{8, 4};
  cfg.model = Model::lp;
  cfg.algo = "spider_large_depth";
  cfg.q = 0.35;
  cfg.gamma = 0.25;
  cfg.trace_counts = {10, 20, 40};
  cfg.trials = 9;
  cfg.master_seed = 123456789;
  cfg.constants = {{"C", 2.5}, {"c_prime", 2.0}};
  cfg.label_mode = LabelMode::fixed;
  cfg.fixed_labels = pattern(8);
  cfg.threads = 3;
  const std::string text = experiment_config_to_json(cfg);
  const auto back = experiment_config_from_json(text);
  CHECK(experiment_config_to_json(back) == text);

  const auto minimal = experiment_config_from_json(
      R"({"shape": {"kind": "kary", "k": 2, "d": 2}, "algo": "ted_small",
          "q": 0.1, "trace_counts": [5]})");
  CHECK(minimal.trials == 1);
  CHECK(minimal.gamma == 0.0);
  CHECK(minimal.label_mode == LabelMode::random);
  CHECK(minimal.threads == 0);
  CHECK(model_to_string(minimal.model) == "ted");
}

TEST_CASE("all five inequality families hold on a reduced grid") {
  VerifyBoundsConfig cfg;
  cfg.n = 8;
  cfg.depths = {20};
  cfg.q_general = {0.1, 0.4, 0.65};
  cfg.q_small = {0.1, 0.3};
  cfg.L = {20};
  cfg.grid_points = 60;
  cfg.label_vectors = 5;
  const auto report = verify_bounds(cfg);
  REQUIRE(report.families.size() == 5);
  CHECK(report.families[0].id == "unit_arc_floor");
  CHECK(report.families[1].id == "anchor_point_floor");
  CHECK(report.families[2].id == "disc_growth_ceiling");
  CHECK(report.families[3].id == "arc_distance_quartic");
  CHECK(report.families[4].id == "arc_sup_floor");
  for (const auto& f : report.families) {
    CHECK(f.points > 0);
    CHECK(f.violations == 0);
  }
  CHECK(report.total_violations() == 0);
  CHECK(report.to_text().find("unit_arc_floor") != std::string::npos);
  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j["total_violations"].get<std::int64_t>() == 0);
  CHECK(j["families"].size() == 5);
}

TEST_CASE("bound verification rejects grids outside its hypotheses") {
  VerifyBoundsConfig cfg;
  cfg.grid_points = 10;
  cfg.label_vectors = 2;

  auto bad = cfg;
  bad.q_general = {0.75};
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);
  bad = cfg;
  bad.q_small = {0.5};
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);
  bad = cfg;
  bad.L = {10};
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);
  bad = cfg;
  bad.depths = {8};
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);
  bad = cfg;
  bad.n = 1;
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);
  bad = cfg;
  bad.grid_points = 1;
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);
  bad = cfg;
  bad.label_vectors = 0;
  CHECK_THROWS_AS(verify_bounds(bad), std::invalid_argument);

  const auto parsed = verify_bounds_config_from_json(R"({"n": 12, "grid_points": 50})");
  CHECK(parsed.n == 12);
  CHECK(parsed.grid_points == 50);
  CHECK(parsed.depths == std::vector<std::int64_t>{20, 21});
  CHECK_THROWS_AS(verify_bounds_config_from_json(R"({"n": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(verify_bounds_config_from_json("[]"), std::invalid_argument);
}
