#include "treerec/string_recon.hpp"

#include "treerec/spider_recon.hpp"

namespace treerec {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

Labels exhaustive_best_match_string(const std::vector<StringTrace>& traces, std::int64_t m,
                                    double q) {
  if (m < 1 || m > 16) fail("exhaustive_best_match_string: m must be in [1, 16]");
  if (traces.empty()) fail("exhaustive_best_match_string: needs at least one trace");

  std::vector<double> mean(m, 0.0);
  for (const StringTrace& t : traces) {
    if (static_cast<std::int64_t>(t.size()) > m)
      fail("exhaustive_best_match_string: trace longer than m");
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t[j] > 1) fail("exhaustive_best_match_string: traces must be 0/1");
      mean[j] += t[j];
    }
  }
  for (double& v : mean) v /= static_cast<double>(traces.size());

  // A length-m string is a single-path spider; all candidate machinery is
  // shared with the spider module.
  SpiderShape s{m, m};
  std::vector<Labels> candidates = enumerate_labelings(m);
  Rng fallback_rng(0x7265636f6ec0ffeeull);  // fixed stream keeps this deterministic
  BestMatchResult r = best_match(mean, candidates, s, q, fallback_rng);
  return r.labels;
}

StringReconstructor exhaustive_string_reconstructor() {
  return [](const std::vector<StringTrace>& traces, std::int64_t m, double q) {
    return exhaustive_best_match_string(traces, m, q);
  };
}

Labels censored_reconstruct(const std::vector<std::optional<StringTrace>>& traces, std::int64_t m,
                            double q, double gamma, const StringReconstructor& inner) {
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("censored_reconstruct: gamma must lie in [0, 1)");
  std::vector<StringTrace> kept;
  kept.reserve(traces.size());
  for (const auto& t : traces)
    if (t.has_value()) kept.push_back(*t);
  if (kept.empty()) throw AllTracesCensored();
  return inner(kept, m, q);
}

}  // namespace treerec
