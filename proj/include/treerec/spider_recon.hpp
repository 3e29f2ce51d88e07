#pragma once
// Mean-based spider reconstruction and its analytic toolkit: exact
// per-coordinate trace means, the trace generating function A(w) and its
// factored form, contour sizing, pairwise better-match tests, and the two
// reductions for deep spiders (whole-trace matching and per-row string
// reconstruction).
//
// Coordinates follow the spider DFS indexing: coordinate l sits at position
// r = l mod d of path s = floor(l / d). Normalized traces (see
// normalize_spider_trace) make every trace a full (n,d) outline so the mean
// is taken coordinate-wise.

#include <complex>
#include <optional>

#include "treerec/channel.hpp"
#include "treerec/rng.hpp"
#include "treerec/string_recon.hpp"
#include "treerec/tree.hpp"

namespace treerec {

// Exact E[b_l] for every coordinate of a normalized trace of the labeled
// (n,d)-spider under per-node deletion probability q. Entry l sums, over
// source coordinates j with r_j >= r_l and s_j >= s_l,
//   a_j * P[Bin(r_j, 1-q) = r_l] * P[Bin(s_j, 1-q^d) = s_l]
// scaled by (1-q).
std::vector<double> expected_trace_mean(const Labels& labels, const SpiderShape& s, double q);

// Same computation on an arbitrary real coefficient vector; d need not
// divide a.size() (used on difference vectors and by the string reduction).
std::vector<double> expected_mean_coeffs(const std::vector<double>& a, std::int64_t d, double q);

// Generating-function values at w:
//   A(w)       = (1-q) * sum_l a_l u^{r_l} U^{s_l}
//   A_tilde(w) = (1-q) * sum_{l >= l*} a_l u^{r_l} U^{s_l - s_{l*}}
// with u = q + (1-q)w, U = q^d + (1-q^d)w^d and l* the first nonzero
// coefficient. For an all-zero vector A = 0 and the factored form is
// undefined: a_tilde is nullopt and ell_star is -1.
struct GeneratingValues {
  std::complex<double> a;
  std::optional<std::complex<double>> a_tilde;
  std::int64_t ell_star = -1;
};
GeneratingValues eval_generating_coeffs(const std::vector<double>& a, std::int64_t d, double q,
                                        std::complex<double> w);
GeneratingValues eval_generating(const Labels& labels, const SpiderShape& s, double q,
                                 std::complex<double> w);

// Contour arc parameter: max(ceil((4 pi^2 n q^d / C)^(1/3)), 20).
std::int64_t choose_L(std::int64_t n, std::int64_t d, double q, double C);

// Coordinate where two expected-mean vectors differ the most; ties resolve
// to the smallest index. Throws if the vectors are identical.
std::int64_t distinguishing_index(const std::vector<double>& e1, const std::vector<double>& e2);

// True iff `a` fits the empirical mean at least as well as `b` does at
// their distinguishing coordinate (<=, so the relation can hold both ways).
bool better_match(const std::vector<double>& empirical, const std::vector<double>& e_a,
                  const std::vector<double>& e_b);

// All 2^n labelings in lexicographic order (labels[0] is the most
// significant position). n <= 24 guard.
std::vector<Labels> enumerate_labelings(std::int64_t n);

// The candidate that is a better match than every other one. When several
// qualify (ties under <=) the lexicographically smallest wins; when none
// does, a uniformly random candidate is drawn from rng and the result is
// flagged.
struct BestMatchResult {
  Labels labels;
  std::int64_t winner = -1;  // index into the candidate list
  bool random_fallback = false;
};
BestMatchResult best_match(const std::vector<double>& empirical_mean,
                           const std::vector<Labels>& candidates, const SpiderShape& s, double q,
                           Rng& rng);

// Whole-spider mean-based reconstruction over all 2^n candidates (n <= 16).
struct SpiderMeanResult {
  Labels labels;
  bool random_fallback = false;
};
SpiderMeanResult reconstruct_spider_meanbased(const std::vector<LabeledOrderedTree>& traces,
                                              const SpiderShape& s, double q, Rng& rng);

// Deep-spider reduction: keep only traces where every path kept at least
// one node (path count is then observable), match surviving paths to
// original paths by order, and run per-path string reconstruction on d bits.
// ok == false when no trace survives the filter.
struct LargeDepthResult {
  bool ok = false;
  Labels labels;
  std::int64_t kept = 0;
  double keep_rate = 0.0;
};
LargeDepthResult reconstruct_spider_large_depth(const std::vector<LabeledOrderedTree>& traces,
                                                const SpiderShape& s, double q,
                                                const StringReconstructor& inner);

// Row reduction: within each trace discard every path that lost a node
// (observable by length); depth-j nodes of the intact paths form a trace of
// row j under deletion probability 1-(1-q)^d. Reconstructs each row with
// `inner` on n/d bits.
struct RowsResult {
  Labels labels;
  double row_q = 0.0;
};
RowsResult reconstruct_spider_rows(const std::vector<LabeledOrderedTree>& traces,
                                   const SpiderShape& s, double q,
                                   const StringReconstructor& inner);

}  // namespace treerec
