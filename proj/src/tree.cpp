#include "treerec/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace treerec {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// k^t with overflow guard; shapes are validated against this before use.
std::int64_t checked_pow(std::int64_t k, std::int64_t t) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < t; ++i) {
    if (r > (std::int64_t{1} << 62) / (k > 1 ? k : 1)) fail("shape too large: k^t overflows");
    r *= k;
  }
  return r;
}

}  // namespace

void validate(const KaryShape& s) {
  if (s.k < 1) fail("kary shape: k must be >= 1");
  if (s.d < 1) fail("kary shape: d must be >= 1");
  (void)node_count(s);
}

void validate(const SpiderShape& s) {
  if (s.n < 1) fail("spider shape: n must be >= 1");
  if (s.d < 1) fail("spider shape: d must be >= 1");
  if (s.n % s.d != 0) fail("spider shape: d must divide n");
}

void validate(const TreeShape& s) {
  std::visit([](const auto& sh) { validate(sh); }, s);
}

std::int64_t node_count(const KaryShape& s) {
  std::int64_t total = 0, pw = 1;
  for (std::int64_t t = 1; t <= s.d; ++t) {
    if (pw > (std::int64_t{1} << 62) / (s.k > 1 ? s.k : 1)) fail("shape too large: node count overflows");
    pw *= s.k;
    if (total > (std::int64_t{1} << 62) - pw) fail("shape too large: node count overflows");
    total += pw;
  }
  return total;
}

std::int64_t node_count(const SpiderShape& s) { return s.n; }

std::int64_t node_count(const TreeShape& s) {
  return std::visit([](const auto& sh) { return node_count(sh); }, s);
}

std::int64_t level_size(const KaryShape& s, std::int64_t t) {
  if (t < 1 || t > s.d) fail("level_size: t out of range");
  return checked_pow(s.k, t);
}

std::int64_t level_start(const KaryShape& s, std::int64_t t) {
  if (t < 1 || t > s.d + 1) fail("level_start: t out of range");
  if (s.k == 1) return t - 1;
  // k + k^2 + ... + k^(t-1)
  std::int64_t total = 0, pw = 1;
  for (std::int64_t h = 1; h < t; ++h) {
    pw *= s.k;
    total += pw;
  }
  return total;
}

std::int64_t depth_of(const KaryShape& s, NodeIndex i) {
  if (i < 0 || i >= node_count(s)) fail("depth_of: index out of range");
  std::int64_t start = 0, size = s.k;
  for (std::int64_t t = 1; t <= s.d; ++t) {
    if (i < start + size) return t;
    start += size;
    size *= s.k;
  }
  fail("depth_of: unreachable");
}

std::int64_t sibling_position(const KaryShape& s, NodeIndex i) {
  std::int64_t t = depth_of(s, i);
  return (i - level_start(s, t)) % s.k;
}

NodeIndex parent_of(const KaryShape& s, NodeIndex i) {
  std::int64_t t = depth_of(s, i);
  if (t < 2) fail("parent_of: node is a child of the root");
  return level_start(s, t - 1) + (i - level_start(s, t)) / s.k;
}

NodeIndex child_at(const KaryShape& s, NodeIndex i, std::int64_t pos) {
  if (pos < 0 || pos >= s.k) fail("child_at: position out of range");
  std::int64_t t = depth_of(s, i);
  if (t >= s.d) fail("child_at: node is a leaf");
  return level_start(s, t + 1) + (i - level_start(s, t)) * s.k + pos;
}

LabeledOrderedTree build_complete_kary(const KaryShape& s, const Labels& labels) {
  validate(s);
  const std::int64_t n = node_count(s);
  if (static_cast<std::int64_t>(labels.size()) != n) fail("build_complete_kary: wrong label count");
  LabeledOrderedTree t;
  t.nodes.resize(n + 1);
  t.nodes[0].children.reserve(s.k);
  for (std::int64_t c = 0; c < s.k; ++c) t.nodes[0].children.push_back(static_cast<std::int32_t>(c + 1));
  for (NodeIndex i = 0; i < n; ++i) {
    TreeNode& node = t.nodes[i + 1];
    if (labels[i] > 1) fail("build_complete_kary: labels must be 0/1");
    node.label = labels[i];
    node.provenance = i;
    if (depth_of(s, i) < s.d) {
      node.children.reserve(s.k);
      for (std::int64_t c = 0; c < s.k; ++c)
        node.children.push_back(static_cast<std::int32_t>(child_at(s, i, c) + 1));
    }
  }
  return t;
}

LabeledOrderedTree build_spider(const SpiderShape& s, const Labels& labels) {
  validate(s);
  if (static_cast<std::int64_t>(labels.size()) != s.n) fail("build_spider: wrong label count");
  LabeledOrderedTree t;
  t.nodes.resize(s.n + 1);
  const std::int64_t paths = s.n / s.d;
  t.nodes[0].children.reserve(paths);
  for (std::int64_t p = 0; p < paths; ++p)
    t.nodes[0].children.push_back(static_cast<std::int32_t>(p * s.d + 1));
  for (NodeIndex i = 0; i < s.n; ++i) {
    TreeNode& node = t.nodes[i + 1];
    if (labels[i] > 1) fail("build_spider: labels must be 0/1");
    node.label = labels[i];
    node.provenance = i;
    if ((i + 1) % s.d != 0) node.children.push_back(static_cast<std::int32_t>(i + 2));
  }
  return t;
}

LabeledOrderedTree build_tree(const TreeShape& s, const Labels& labels) {
  if (const auto* k = std::get_if<KaryShape>(&s)) return build_complete_kary(*k, labels);
  return build_spider(std::get<SpiderShape>(s), labels);
}

bool same_tree(const LabeledOrderedTree& a, const LabeledOrderedTree& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const TreeNode& nx = a.nodes[x];
    const TreeNode& ny = b.nodes[y];
    if (x != 0 && nx.label != ny.label) return false;
    if (nx.children.size() != ny.children.size()) return false;
    for (std::size_t c = 0; c < nx.children.size(); ++c)
      stack.emplace_back(nx.children[c], ny.children[c]);
  }
  return true;
}

Labels labels_of(const LabeledOrderedTree& t) {
  Labels out(t.non_root_count());
  for (std::int64_t i = 0; i < t.non_root_count(); ++i) out[i] = t.nodes[i + 1].label;
  return out;
}

std::vector<std::int32_t> parents(const LabeledOrderedTree& t) {
  std::vector<std::int32_t> par(t.nodes.size(), -1);
  for (std::size_t v = 0; v < t.nodes.size(); ++v)
    for (std::int32_t c : t.nodes[v].children) par[c] = static_cast<std::int32_t>(v);
  return par;
}

std::vector<std::int32_t> depths(const LabeledOrderedTree& t) {
  std::vector<std::int32_t> dep(t.nodes.size(), 0);
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    std::int32_t v = stack.back();
    stack.pop_back();
    for (std::int32_t c : t.nodes[v].children) {
      dep[c] = dep[v] + 1;
      stack.push_back(c);
    }
  }
  return dep;
}

namespace {

// Post-order traversal order of pool slots.
std::vector<std::int32_t> post_order(const LabeledOrderedTree& t) {
  std::vector<std::int32_t> order;
  order.reserve(t.nodes.size());
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    std::int32_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (std::int32_t c : t.nodes[v].children) stack.push_back(c);
  }
  std::reverse(order.begin(), order.end());  // children before parents
  return order;
}

}  // namespace

std::vector<std::int32_t> heights(const LabeledOrderedTree& t) {
  std::vector<std::int32_t> h(t.nodes.size(), 0);
  for (std::int32_t v : post_order(t))
    for (std::int32_t c : t.nodes[v].children) h[v] = std::max(h[v], h[c] + 1);
  return h;
}

std::vector<std::int64_t> subtree_sizes(const LabeledOrderedTree& t) {
  std::vector<std::int64_t> sz(t.nodes.size(), 1);
  for (std::int32_t v : post_order(t))
    for (std::int32_t c : t.nodes[v].children) sz[v] += sz[c];
  return sz;
}

IndexSets index_sets(const KaryShape& s) {
  validate(s);
  IndexSets out;
  out.J.resize(s.d + 1);
  out.I_levels.resize(s.d + 1);
  for (std::int64_t t = 1; t <= s.d; ++t) {
    const std::int64_t start = level_start(s, t);
    const std::int64_t size = level_size(s, t);
    out.J[t].reserve(size);
    for (std::int64_t p = 0; p < size; ++p) out.J[t].push_back(start + p);
    if (t == 1) {
      out.I_levels[1] = out.J[1];
    } else {
      for (std::int64_t p = 0; p < size; ++p)
        if (p % s.k != 0) out.I_levels[t].push_back(start + p);
    }
  }
  for (std::int64_t t = 1; t <= s.d - 1; ++t)
    out.I.insert(out.I.end(), out.I_levels[t].begin(), out.I_levels[t].end());
  return out;
}

IndexSets index_sets(const TreeShape& s) {
  if (!std::holds_alternative<KaryShape>(s))
    fail("index_sets: defined for complete k-ary shapes only");
  return index_sets(std::get<KaryShape>(s));
}

std::vector<NodeIndex> canonical_P(const KaryShape& s, NodeIndex i) {
  std::vector<NodeIndex> path;
  NodeIndex cur = i;
  path.push_back(cur);
  while (depth_of(s, cur) >= 2) {
    cur = parent_of(s, cur);
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<NodeIndex> canonical_H(const KaryShape& s, NodeIndex i) {
  if (depth_of(s, i) > s.d - 1) fail("canonical_H: node must have depth <= d-1");
  std::vector<NodeIndex> out;
  NodeIndex cur = i;
  out.push_back(cur);
  while (depth_of(s, cur) < s.d - 1) {
    cur = child_at(s, cur, 0);
    out.push_back(cur);
  }
  for (std::int64_t c = 0; c < s.k; ++c) out.push_back(child_at(s, cur, c));
  return out;
}

std::vector<NodeIndex> canonical_G(const KaryShape& s, NodeIndex i) {
  std::vector<NodeIndex> out = canonical_P(s, i);
  std::vector<NodeIndex> tail = canonical_H(s, i);
  out.insert(out.end(), tail.begin() + 1, tail.end());
  return out;
}

std::vector<std::int64_t> pi_function(const KaryShape& s, NodeIndex i) {
  std::vector<std::int64_t> pi(s.d, 0);
  std::vector<NodeIndex> path = canonical_P(s, i);
  for (std::size_t t = 0; t < path.size(); ++t) pi[t] = sibling_position(s, path[t]);
  return pi;
}

NodeIndex psi(const KaryShape& s, NodeIndex j) {
  if (s.d < 2) fail("psi: requires d >= 2");
  if (depth_of(s, j) != s.d - 1) fail("psi: node must have depth d-1");
  NodeIndex cur = j;
  while (depth_of(s, cur) >= 2 && sibling_position(s, cur) == 0) cur = parent_of(s, cur);
  return cur;
}

std::string shape_to_string(const TreeShape& s) {
  if (const auto* k = std::get_if<KaryShape>(&s))
    return "kary(k=" + std::to_string(k->k) + ",d=" + std::to_string(k->d) + ")";
  const auto& sp = std::get<SpiderShape>(s);
  return "spider(n=" + std::to_string(sp.n) + ",d=" + std::to_string(sp.d) + ")";
}

}  // namespace treerec
