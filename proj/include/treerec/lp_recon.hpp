#pragma once
// Reconstruction from traces of the label-shift (lp) channel on complete
// k-ary trees. Because that channel only migrates labels up left-only paths
// and trims their tails, surviving route structure is label-exact:
//   - large arity: for every depth-(d-1) route j, the labels along the route
//     tail and the children of its endpoint form a string-channel trace of
//     the anchor segment H(psi(j)); reconstruct each segment independently.
//   - small arity: any trace where the full route of an anchor survives
//     carries the original H labels verbatim; copy them from the first such
//     trace.
// Both need d >= 2.

#include "treerec/string_recon.hpp"
#include "treerec/trace_view.hpp"
#include "treerec/tree.hpp"

namespace treerec {

// The observed segment for j at depth d-1: labels of the route nodes from
// depth t_psi(j) down to v_{d-1}, then the labels of v_{d-1}'s children
// (k' + 1 <= k of them). ok == false iff the route walk is undefined.
struct SegmentExtract {
  bool ok = false;
  std::vector<std::uint8_t> bits;
};
SegmentExtract extract_s(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex j);

struct LpLargeResult {
  bool ok = false;
  Labels labels;
  // On termination: the first (trace, route) pair whose walk was undefined.
  std::int64_t bad_trace = -1;
  NodeIndex bad_route = -1;
};
LpLargeResult reconstruct_lp_large(const std::vector<LabeledOrderedTree>& traces,
                                   const KaryShape& s, double q,
                                   const StringReconstructor& inner);

struct LpSmallResult {
  bool ok = false;
  Labels labels;
  NodeIndex failed_anchor = -1;  // anchor with no fully surviving route in any trace
};
LpSmallResult reconstruct_lp_small(const std::vector<LabeledOrderedTree>& traces,
                                   const KaryShape& s);

}  // namespace treerec
