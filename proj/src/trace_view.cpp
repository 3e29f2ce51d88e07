#include "treerec/trace_view.hpp"

#include <algorithm>
#include <stdexcept>

namespace treerec {

namespace {

// Walks pi(i) from the trace root through `steps` child picks, requiring
// exactly k children at every node stepped through.
bool walk(const LabeledOrderedTree& y, const KaryShape& s, const std::vector<std::int64_t>& pi,
          std::int64_t steps, std::vector<std::int32_t>& out) {
  std::int32_t cur = 0;
  out.push_back(cur);
  for (std::int64_t t = 0; t < steps; ++t) {
    const auto& kids = y.nodes[cur].children;
    if (static_cast<std::int64_t>(kids.size()) != s.k) return false;
    cur = kids[pi[t]];
    out.push_back(cur);
  }
  return true;
}

}  // namespace

TraceRoute trace_P(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i) {
  TraceRoute r;
  std::vector<std::int64_t> pi = pi_function(s, i);
  if (!walk(y, s, pi, depth_of(s, i), r.nodes)) return TraceRoute{};
  r.ok = true;
  return r;
}

TraceRoute trace_G(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i) {
  TraceRoute r;
  std::vector<std::int64_t> pi = pi_function(s, i);
  if (!walk(y, s, pi, s.d - 1, r.nodes)) return TraceRoute{};
  const auto& kids = y.nodes[r.nodes.back()].children;
  if (static_cast<std::int64_t>(kids.size()) != s.k) return TraceRoute{};
  r.nodes.insert(r.nodes.end(), kids.begin(), kids.end());
  r.ok = true;
  return r;
}

TraceRoute trace_H(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i) {
  TraceRoute g = trace_G(y, s, i);
  if (!g.ok) return TraceRoute{};
  TraceRoute r;
  r.ok = true;
  r.nodes.assign(g.nodes.begin() + depth_of(s, i), g.nodes.end());
  return r;
}

bool is_b_balanced(const LabeledOrderedTree& x, const DeletionSet& del, std::int64_t b) {
  std::vector<std::uint8_t> deleted(x.nodes.size(), 0);
  for (NodeIndex v : del.nodes) {
    if (v < 0 || v + 1 >= x.size()) throw std::invalid_argument("is_b_balanced: bad deletion index");
    deleted[v + 1] = 1;
  }
  for (std::size_t v = 0; v < x.nodes.size(); ++v) {
    std::int64_t run = 0;
    for (std::int32_t c : x.nodes[v].children) {
      run = deleted[c] ? run + 1 : 0;
      if (run > b) return false;
    }
  }
  return true;
}

bool is_s_stable(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex i, std::int64_t stab) {
  TraceRoute g = trace_G(y, s, i);
  if (!g.ok) return false;
  std::vector<std::int32_t> h = heights(y);
  // Internal route nodes are v_0..v_{d-1}; each has exactly k children here.
  for (std::int64_t t = 0; t < s.d; ++t) {
    std::int32_t v = g.nodes[t];
    if (h[v] > stab) continue;
    for (std::int32_t c : y.nodes[v].children)
      if (h[c] != h[v] - 1) return false;
  }
  return true;
}

std::vector<NodeIndex> g_plus(const KaryShape& s, NodeIndex i) {
  std::vector<NodeIndex> route = canonical_G(s, i);
  std::vector<NodeIndex> out;
  // Children of the root.
  for (std::int64_t c = 0; c < s.k; ++c) out.push_back(c);
  // Children of every internal route node u_1..u_{d-1}.
  for (std::int64_t t = 0; t + 1 < s.d; ++t) {
    NodeIndex u = route[t];
    for (std::int64_t c = 0; c < s.k; ++c) out.push_back(child_at(s, u, c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace treerec
