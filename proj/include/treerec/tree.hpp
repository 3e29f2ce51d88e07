#pragma once
// Labeled ordered trees over two shape families (complete k-ary trees and
// spiders), plus the index machinery the reconstruction algorithms walk:
// per-level node sets, subtree anchors, canonical root/leaf routes, and the
// anchor bijection for depth-(d-1) nodes.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace treerec {

// Index of a non-root node. The root is never indexed and never labeled.
// Complete k-ary trees index in BFS order (children of the root are
// 0..k-1); an (n,d)-spider indexes in DFS order (path p, 1-based, depth j
// maps to (p-1)*d + j-1).
using NodeIndex = std::int64_t;

using Labels = std::vector<std::uint8_t>;  // one 0/1 label per non-root node

struct KaryShape {
  std::int64_t k = 1;  // arity, >= 1
  std::int64_t d = 1;  // depth, >= 1
};

struct SpiderShape {
  std::int64_t n = 1;  // non-root node count; d must divide n
  std::int64_t d = 1;  // common path depth, >= 1
};

using TreeShape = std::variant<KaryShape, SpiderShape>;

void validate(const KaryShape& s);    // throws std::invalid_argument
void validate(const SpiderShape& s);  // throws std::invalid_argument
void validate(const TreeShape& s);

// Non-root node count: k + k^2 + ... + k^d for k-ary, n for spiders.
std::int64_t node_count(const KaryShape& s);
std::int64_t node_count(const SpiderShape& s);
std::int64_t node_count(const TreeShape& s);

// --- BFS-level arithmetic for complete k-ary shapes -----------------------
// Level t (1-based) holds k^t nodes with indices
// [level_start(t), level_start(t) + k^t).
std::int64_t level_size(const KaryShape& s, std::int64_t t);
std::int64_t level_start(const KaryShape& s, std::int64_t t);
std::int64_t depth_of(const KaryShape& s, NodeIndex i);
// Position of i among its siblings, 0-based.
std::int64_t sibling_position(const KaryShape& s, NodeIndex i);
// Parent of a node at depth >= 2 (children of the root have no parent index).
NodeIndex parent_of(const KaryShape& s, NodeIndex i);
NodeIndex child_at(const KaryShape& s, NodeIndex i, std::int64_t pos);

struct TreeNode {
  std::uint8_t label = 0;  // unused on the root
  // Original index whose label this node carries; -1 when unknown (root,
  // hand-built trees, zero padding). Diagnostic metadata for tests and
  // oracles only: reconstruction code never reads it.
  std::int64_t provenance = -1;
  std::vector<std::int32_t> children;  // ordered; indices into the node pool
};

// Node pool; index 0 is always the root. Child order is significant.
// Trees built by build_tree() keep pool order aligned with node indexing:
// non-root node with index i sits at pool slot i + 1.
struct LabeledOrderedTree {
  std::vector<TreeNode> nodes;

  std::int64_t size() const { return static_cast<std::int64_t>(nodes.size()); }
  std::int64_t non_root_count() const { return size() - 1; }
};

LabeledOrderedTree build_complete_kary(const KaryShape& s, const Labels& labels);
LabeledOrderedTree build_spider(const SpiderShape& s, const Labels& labels);
LabeledOrderedTree build_tree(const TreeShape& s, const Labels& labels);

// Structure-and-label equality; ignores provenance.
bool same_tree(const LabeledOrderedTree& a, const LabeledOrderedTree& b);

// Labels of a tree built by build_tree(), in node-index order.
Labels labels_of(const LabeledOrderedTree& t);

// Per-pool-slot depth (root = 0), height (leaf = 0), parent slot (root = -1),
// and subtree node count (self included).
std::vector<std::int32_t> depths(const LabeledOrderedTree& t);
std::vector<std::int32_t> heights(const LabeledOrderedTree& t);
std::vector<std::int32_t> parents(const LabeledOrderedTree& t);
std::vector<std::int64_t> subtree_sizes(const LabeledOrderedTree& t);

// --- index families for complete k-ary shapes ------------------------------
// J[t]: nodes at depth t, t = 1..d (J[0] kept empty so J[t] lines up).
// I_levels[t]: J[1] when t = 1; the non-leftmost members of J[t] for t >= 2.
// I: union of I_levels[1..d-1] — the subtree anchors. Empty when d == 1.
struct IndexSets {
  std::vector<std::vector<NodeIndex>> J;
  std::vector<std::vector<NodeIndex>> I_levels;
  std::vector<NodeIndex> I;
};
IndexSets index_sets(const KaryShape& s);
IndexSets index_sets(const TreeShape& s);  // throws on spider shapes

// Canonical routes for an anchor i at depth t (root excluded throughout):
//   canonical_P(i) = u_1..u_t               root-to-i path, u_t = i
//   canonical_H(i) = u_t..u_{d-1}, u_d..u_{d+k-1}
//                    left-only path from i to depth d-1, then all k children
//                    of u_{d-1} left to right (u_d is the leaf the left-only
//                    path reaches; the rest are its siblings)
//   canonical_G(i) = u_1..u_{d+k-1}         P then H, with i listed once
std::vector<NodeIndex> canonical_P(const KaryShape& s, NodeIndex i);
std::vector<NodeIndex> canonical_H(const KaryShape& s, NodeIndex i);
std::vector<NodeIndex> canonical_G(const KaryShape& s, NodeIndex i);

// pi(i)[t] for t = 0..d-1: the child position taken at depth t along the
// canonical route of i (root-to-i positions up to depth t_i, then 0 along
// the left-only tail).
std::vector<std::int64_t> pi_function(const KaryShape& s, NodeIndex i);

// For j at depth d-1 (d >= 2): the unique anchor i in I with j on the
// left-only path of canonical_H(i).
NodeIndex psi(const KaryShape& s, NodeIndex j);

std::string shape_to_string(const TreeShape& s);

}  // namespace treerec
