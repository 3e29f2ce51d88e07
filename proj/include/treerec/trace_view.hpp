#pragma once
// Trace-side counterparts of the canonical routes, and the structural
// predicates the k-ary algorithms condition on.
//
// The routes follow pi(i) inside a trace: starting at the root, step t picks
// the child at position pi(i)[t], and the walk is only defined while the
// current node has exactly k children. An undefined route is a value
// (ok == false), not an error.

#include "treerec/channel.hpp"
#include "treerec/tree.hpp"

namespace treerec {

struct TraceRoute {
  bool ok = false;
  // Pool slots in the trace, route order. For trace_P and trace_G the first
  // entry is the trace root; trace_H starts at the anchor's route position.
  std::vector<std::int32_t> nodes;
};

// Root-to-anchor walk: v_0..v_{t_i}. Defined iff v_0..v_{t_i - 1} each have
// exactly k children.
TraceRoute trace_P(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i);

// Full route v_0..v_{d+k-1}: the root-to-depth-(d-1) walk along pi(i)
// followed by all k children of v_{d-1}. Defined iff every step has exactly
// k children, v_{d-1} included.
TraceRoute trace_G(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i);

// Suffix of trace_G from the anchor's depth: v_{t_i}..v_{d+k-1}.
TraceRoute trace_H(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i);

// Ground-truth predicate (oracle surface; needs the deletion set, not the
// trace): no internal node of x loses more than b consecutive children.
bool is_b_balanced(const LabeledOrderedTree& x, const DeletionSet& del, std::int64_t b);

// Trace-observable stability: trace_G(y, i) is defined and every internal
// route node whose height in y is h <= s has all k children at height
// exactly h-1.
bool is_s_stable(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i, std::int64_t stab);

// Original-tree indices of the expanded route: canonical_G(i) plus all
// children of its internal nodes (the root's children included). Sorted.
// Size is d*k for any anchor.
std::vector<NodeIndex> g_plus(const KaryShape& s, NodeIndex i);

}  // namespace treerec
