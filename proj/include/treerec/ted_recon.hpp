#pragma once
// Reconstruction from traces of the child-splicing (ted) channel on
// complete k-ary trees. Two regimes:
//   - large arity: per-trace route estimation (find_paths) buckets traces by
//     the depth-(d-1) node they witnessed; each bucket yields one root path
//     directly and one string-reconstruction instance for the k leaf labels.
//   - small arity: filter traces that are s-stable for an anchor, then take
//     coordinate-wise majority of the anchor's route labels.
// Both need d >= 2 (a depth-1 tree is a star; reconstruct it as a string).

#include "treerec/string_recon.hpp"
#include "treerec/trace_view.hpp"
#include "treerec/tree.hpp"

namespace treerec {

// Plug-in rounding of a descendant count against its expected mass
// (1-q) * (k + k^2 + ... + k^(level+1)): the unique integer within 1/2 of
// the ratio, rounding half up.
std::int64_t alpha_hat(double count, const KaryShape& s, std::int64_t level, double q);

struct PathEstimate {
  std::int32_t route_node = -1;       // trace pool slot of the witnessing node
  std::vector<std::int64_t> digits;   // estimated child positions, digits[l], l = 0..d-2
  NodeIndex node = -1;                // member of J_{d-1}
};

// One estimate per member of S (parents of depth-d leaves, left to right).
std::vector<PathEstimate> find_paths_detailed(const LabeledOrderedTree& y, const KaryShape& s,
                                              double q);
// The estimated pre-image set: sorted, deduplicated node indices.
std::vector<NodeIndex> find_paths(const LabeledOrderedTree& y, const KaryShape& s, double q);

struct TedLargeResult {
  bool ok = false;
  Labels labels;
  NodeIndex empty_bucket = -1;  // set when a depth-(d-1) bucket received no trace
};
TedLargeResult reconstruct_ted_large(const std::vector<LabeledOrderedTree>& traces,
                                     const KaryShape& s, double q,
                                     const StringReconstructor& inner);

// Stability radius: ceil(log_k(log_{1/q}(3dk))), floored at 1 (and 1 when
// k == 1 or q == 0, where the expression degenerates).
std::int64_t stability_radius(const KaryShape& s, double q);

struct TedSmallResult {
  bool ok = false;
  Labels labels;
  NodeIndex failed_anchor = -1;  // set when no trace is s-stable for an anchor
};
TedSmallResult reconstruct_ted_small(const std::vector<LabeledOrderedTree>& traces,
                                     const KaryShape& s, double q);

}  // namespace treerec
