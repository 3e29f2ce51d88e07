#pragma once
// Pluggable string reconstruction. The tree algorithms reduce parts of their
// work to reconstructing an m-bit string from deletion-channel traces and
// accept any reconstructor satisfying this contract:
//   - input: traces (each a subsequence of the source), the length m, and q
//   - output: an m-bit estimate
//   - deterministic: equal inputs give equal outputs
//
// The provided implementation matches the empirical coordinate mean of the
// traces (padded with zeros to length m) against the exact expected mean of
// every candidate string, reusing the single-path spider machinery.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "treerec/tree.hpp"

namespace treerec {

using StringTrace = std::vector<std::uint8_t>;

using StringReconstructor =
    std::function<Labels(const std::vector<StringTrace>&, std::int64_t m, double q)>;

// Exhaustive best-match over all 2^m candidates; m <= 16. The no-best-match
// fallback draws from a fixed-seed stream so the function stays
// deterministic.
Labels exhaustive_best_match_string(const std::vector<StringTrace>& traces, std::int64_t m,
                                    double q);
StringReconstructor exhaustive_string_reconstructor();

struct AllTracesCensored : std::runtime_error {
  AllTracesCensored() : std::runtime_error("censored_reconstruct: every trace was censored") {}
};

// Censoring wrapper: drops censored-away traces (the nullopt sentinel) and
// delegates the remainder to `inner`. gamma is accepted for interface
// symmetry with the channel; it does not change the computation. Throws
// AllTracesCensored when nothing remains.
Labels censored_reconstruct(const std::vector<std::optional<StringTrace>>& traces, std::int64_t m,
                            double q, double gamma, const StringReconstructor& inner);

}  // namespace treerec
