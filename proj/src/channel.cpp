#include "treerec/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace treerec {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_deletion_set(const LabeledOrderedTree& x, const DeletionSet& del) {
  NodeIndex prev = -1;
  for (NodeIndex v : del.nodes) {
    if (v <= prev) fail("deletion set must be strictly increasing");
    if (v < 0 || v >= x.non_root_count()) fail("deletion set index out of range");
    prev = v;
  }
}

// Rebuilds a compacted tree from an adjacency that may contain dead slots.
// New pool order is pre-order, so parents precede children.
LabeledOrderedTree rebuild(const LabeledOrderedTree& x,
                           const std::vector<std::vector<std::int32_t>>& kids,
                           const std::vector<std::uint8_t>& labels,
                           const std::vector<std::int64_t>& provenance) {
  LabeledOrderedTree out;
  out.nodes.emplace_back();  // root
  // Stack of (old slot, new parent slot); children pushed right-to-left so
  // they pop left-to-right.
  std::vector<std::pair<std::int32_t, std::int32_t>> stack;
  for (auto it = kids[0].rbegin(); it != kids[0].rend(); ++it) stack.push_back({*it, 0});
  while (!stack.empty()) {
    auto [old_slot, new_parent] = stack.back();
    stack.pop_back();
    std::int32_t slot = static_cast<std::int32_t>(out.nodes.size());
    out.nodes.emplace_back();
    out.nodes[slot].label = labels[old_slot];
    out.nodes[slot].provenance = provenance[old_slot];
    out.nodes[new_parent].children.push_back(slot);
    for (auto it = kids[old_slot].rbegin(); it != kids[old_slot].rend(); ++it)
      stack.push_back({*it, slot});
  }
  return out;
}

}  // namespace

Model model_from_string(const std::string& name) {
  if (name == "ted") return Model::ted;
  if (name == "lp") return Model::lp;
  fail("model must be ted or lp");
}

std::string model_to_string(Model m) { return m == Model::ted ? "ted" : "lp"; }

LabeledOrderedTree delete_ted(const LabeledOrderedTree& x, const DeletionSet& del) {
  check_deletion_set(x, del);
  std::vector<std::uint8_t> deleted(x.nodes.size(), 0);
  for (NodeIndex v : del.nodes) deleted[v + 1] = 1;

  // surviving[v]: ordered list of surviving nodes replacing v's child list,
  // with deleted children spliced through. Built children-first.
  std::vector<std::vector<std::int32_t>> surviving(x.nodes.size());
  std::vector<std::int32_t> order;
  order.reserve(x.nodes.size());
  {
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      std::int32_t v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (std::int32_t c : x.nodes[v].children) stack.push_back(c);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::int32_t v = *it;
    auto& list = surviving[v];
    for (std::int32_t c : x.nodes[v].children) {
      if (deleted[c]) {
        list.insert(list.end(), surviving[c].begin(), surviving[c].end());
        surviving[c].clear();
        surviving[c].shrink_to_fit();
      } else {
        list.push_back(c);
      }
    }
  }

  std::vector<std::uint8_t> labels(x.nodes.size());
  std::vector<std::int64_t> provenance(x.nodes.size());
  for (std::size_t v = 0; v < x.nodes.size(); ++v) {
    labels[v] = x.nodes[v].label;
    provenance[v] = x.nodes[v].provenance;
  }
  return rebuild(x, surviving, labels, provenance);
}

LabeledOrderedTree delete_lp(const LabeledOrderedTree& x, const DeletionSet& del) {
  check_deletion_set(x, del);
  const std::int64_t n = x.non_root_count();
  std::vector<std::vector<std::int32_t>> kids(x.nodes.size());
  std::vector<std::uint8_t> labels(x.nodes.size());
  std::vector<std::int64_t> prov(x.nodes.size());
  std::vector<std::int32_t> parent(x.nodes.size(), -1);
  for (std::size_t v = 0; v < x.nodes.size(); ++v) {
    kids[v] = x.nodes[v].children;
    labels[v] = x.nodes[v].label;
    prov[v] = x.nodes[v].provenance;
    for (std::int32_t c : kids[v]) parent[c] = static_cast<std::int32_t>(v);
  }
  // where[e]: pool slot currently carrying the label of non-root node e.
  std::vector<std::int32_t> where(n);
  std::vector<std::int64_t> entity(x.nodes.size(), -1);
  for (std::int64_t e = 0; e < n; ++e) {
    where[e] = static_cast<std::int32_t>(e + 1);
    entity[e + 1] = e;
  }

  for (NodeIndex v : del.nodes) {
    std::int32_t start = where[v];
    // Left-only path from the node currently holding v's label.
    std::vector<std::int32_t> path{start};
    while (!kids[path.back()].empty()) path.push_back(kids[path.back()].front());
    // Shift labels (and their identities) up one step along the path.
    for (std::size_t idx = 0; idx + 1 < path.size(); ++idx) {
      labels[path[idx]] = labels[path[idx + 1]];
      prov[path[idx]] = prov[path[idx + 1]];
      std::int64_t e = entity[path[idx + 1]];
      entity[path[idx]] = e;
      if (e >= 0) where[e] = path[idx];
    }
    // The path's final node is a leaf; detach it.
    std::int32_t tail = path.back();
    auto& plist = kids[parent[tail]];
    plist.erase(std::find(plist.begin(), plist.end(), tail));
    entity[tail] = -1;
  }

  return rebuild(x, kids, labels, prov);
}

LabeledOrderedTree apply_deletions(Model m, const LabeledOrderedTree& x, const DeletionSet& del) {
  return m == Model::ted ? delete_ted(x, del) : delete_lp(x, del);
}

DeletionSet sample_deletions(std::int64_t non_root_count, double q, Rng& rng) {
  DeletionSet del;
  for (std::int64_t i = 0; i < non_root_count; ++i)
    if (rng.bernoulli(q)) del.nodes.push_back(i);
  return del;
}

LabeledOrderedTree sample_trace(const LabeledOrderedTree& x, Model m, double q, Rng& rng) {
  DeletionSet del = sample_deletions(x.non_root_count(), q, rng);
  return apply_deletions(m, x, del);
}

CensoredTrace censor(const LabeledOrderedTree& trace, double gamma, Rng& rng) {
  if (rng.bernoulli(gamma)) return std::nullopt;
  return trace;
}

LabeledOrderedTree normalize_spider_trace(const LabeledOrderedTree& trace, const SpiderShape& s) {
  validate(s);
  const std::int64_t paths = s.n / s.d;
  const auto& root_kids = trace.nodes[0].children;
  if (static_cast<std::int64_t>(root_kids.size()) > paths)
    fail("normalize_spider_trace: trace has more paths than the shape");

  LabeledOrderedTree out;
  out.nodes.resize(s.n + 1);
  for (std::int64_t p = 0; p < paths; ++p)
    out.nodes[0].children.push_back(static_cast<std::int32_t>(p * s.d + 1));
  for (NodeIndex i = 0; i < s.n; ++i) {
    if ((i + 1) % s.d != 0) out.nodes[i + 1].children.push_back(static_cast<std::int32_t>(i + 2));
  }
  for (std::size_t p = 0; p < root_kids.size(); ++p) {
    std::int32_t cur = root_kids[p];
    std::int64_t depth = 0;
    for (;;) {
      if (depth >= s.d) fail("normalize_spider_trace: path longer than d");
      TreeNode& slot = out.nodes[p * s.d + depth + 1];
      slot.label = trace.nodes[cur].label;
      slot.provenance = trace.nodes[cur].provenance;
      const auto& c = trace.nodes[cur].children;
      if (c.empty()) break;
      if (c.size() > 1) fail("normalize_spider_trace: input is not a spider trace");
      cur = c.front();
      ++depth;
    }
  }
  return out;
}

}  // namespace treerec
