#pragma once
// The two node-deletion channels on labeled ordered trees, trace sampling,
// optional censoring, and spider trace normalization.
//
// Both channels never remove the root. A deletion set lists indices of
// non-root nodes of the input tree (index i = pool slot i+1 of a tree built
// by build_tree).
//
// ted: a deleted node's children are spliced, in order, into its parent's
// child list at the deleted node's position. Batch application is
// order-independent.
//
// lp: deleting a node shifts every label on the left-only path below it up
// by one step and removes that path's final node (a leaf); the rest of the
// structure is untouched. Batch semantics: deletions apply in increasing
// index order, each acting on the node currently carrying the deleted
// index's label (labels migrate as earlier deletions apply). A node's child
// count never increases under this channel.

#include <optional>

#include "treerec/rng.hpp"
#include "treerec/tree.hpp"

namespace treerec {

enum class Model { ted, lp };

Model model_from_string(const std::string& name);  // "ted" | "lp"
std::string model_to_string(Model m);

struct DeletionSet {
  std::vector<NodeIndex> nodes;  // strictly increasing, in [0, non_root_count)
};

LabeledOrderedTree delete_ted(const LabeledOrderedTree& x, const DeletionSet& del);
LabeledOrderedTree delete_lp(const LabeledOrderedTree& x, const DeletionSet& del);
LabeledOrderedTree apply_deletions(Model m, const LabeledOrderedTree& x, const DeletionSet& del);

// Marks each non-root node independently with probability q.
DeletionSet sample_deletions(std::int64_t non_root_count, double q, Rng& rng);
LabeledOrderedTree sample_trace(const LabeledOrderedTree& x, Model m, double q, Rng& rng);

// Censoring wrapper: the output is the empty sentinel (nullopt) with
// probability gamma, the unmodified trace otherwise.
using CensoredTrace = std::optional<LabeledOrderedTree>;
CensoredTrace censor(const LabeledOrderedTree& trace, double gamma, Rng& rng);

// Restores a spider trace to its original outline: each surviving path keeps
// its position and is padded with 0-labeled nodes at the bottom to depth d;
// all-zero paths are appended on the right until n/d paths exist. Throws if
// the input is not a spider trace compatible with the shape.
LabeledOrderedTree normalize_spider_trace(const LabeledOrderedTree& trace, const SpiderShape& s);

}  // namespace treerec
