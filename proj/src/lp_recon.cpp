#include "treerec/lp_recon.hpp"

#include <stdexcept>
#include <utility>

namespace treerec {
namespace {

void require_usable(const KaryShape& s, const std::vector<LabeledOrderedTree>& traces,
                    const char* who) {
  validate(s);
  if (s.d < 2)
    throw std::invalid_argument(std::string(who) + ": needs depth >= 2 (depth 1 is a star; use "
                                                   "string reconstruction)");
  if (traces.empty()) throw std::invalid_argument(std::string(who) + ": needs at least one trace");
}

}  // namespace

SegmentExtract extract_s(const LabeledOrderedTree& y, const KaryShape& s, NodeIndex j) {
  validate(s);
  if (s.d < 2) throw std::invalid_argument("extract_s: needs depth >= 2");
  if (depth_of(s, j) != s.d - 1)
    throw std::invalid_argument("extract_s: route index must sit at depth d-1");

  const TraceRoute route = trace_P(y, s, j);
  if (!route.ok) return {};

  const NodeIndex i = psi(s, j);
  const std::int64_t t = depth_of(s, i);

  SegmentExtract out;
  out.ok = true;
  out.bits.reserve(static_cast<std::size_t>(s.d - t + s.k));
  // route.nodes[dd] is v_dd: the walk root..v_{d-1}. Take depths t..d-1,
  // then whatever children v_{d-1} still has (the channel only removes
  // children here, never adds).
  for (std::int64_t dd = t; dd <= s.d - 1; ++dd)
    out.bits.push_back(y.nodes[static_cast<std::size_t>(route.nodes[static_cast<std::size_t>(dd)])]
                           .label);
  const TreeNode& end =
      y.nodes[static_cast<std::size_t>(route.nodes[static_cast<std::size_t>(s.d - 1)])];
  if (static_cast<std::int64_t>(end.children.size()) > s.k)
    throw std::invalid_argument("extract_s: trace node has more than k children");
  for (std::int32_t c : end.children)
    out.bits.push_back(y.nodes[static_cast<std::size_t>(c)].label);
  return out;
}

LpLargeResult reconstruct_lp_large(const std::vector<LabeledOrderedTree>& traces,
                                   const KaryShape& s, double q,
                                   const StringReconstructor& inner) {
  require_usable(s, traces, "reconstruct_lp_large");
  if (!(q >= 0.0 && q < 1.0))
    throw std::invalid_argument("reconstruct_lp_large: q must lie in [0, 1)");
  if (!inner) throw std::invalid_argument("reconstruct_lp_large: missing string reconstructor");

  const IndexSets sets = index_sets(s);
  LpLargeResult out;
  out.labels.assign(static_cast<std::size_t>(node_count(s)), 0);

  for (NodeIndex j : sets.J[static_cast<std::size_t>(s.d - 1)]) {
    const NodeIndex i = psi(s, j);
    const std::int64_t m = s.d - depth_of(s, i) + s.k;

    std::vector<StringTrace> bits;
    bits.reserve(traces.size());
    for (std::size_t t = 0; t < traces.size(); ++t) {
      SegmentExtract seg = extract_s(traces[t], s, j);
      if (!seg.ok) {
        // One undefined route anywhere aborts the whole reconstruction.
        out.labels.clear();
        out.bad_trace = static_cast<std::int64_t>(t);
        out.bad_route = j;
        return out;
      }
      bits.push_back(std::move(seg.bits));
    }

    const Labels rec = inner(bits, m, q);
    if (static_cast<std::int64_t>(rec.size()) != m)
      throw std::runtime_error("reconstruct_lp_large: inner reconstructor returned wrong length");
    const std::vector<NodeIndex> target = canonical_H(s, i);
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(m); ++idx)
      out.labels[static_cast<std::size_t>(target[idx])] = rec[idx];
  }
  out.ok = true;
  return out;
}

LpSmallResult reconstruct_lp_small(const std::vector<LabeledOrderedTree>& traces,
                                   const KaryShape& s) {
  require_usable(s, traces, "reconstruct_lp_small");

  const IndexSets sets = index_sets(s);
  LpSmallResult out;
  out.labels.assign(static_cast<std::size_t>(node_count(s)), 0);

  for (NodeIndex i : sets.I) {
    const std::vector<NodeIndex> target = canonical_H(s, i);
    bool found = false;
    for (const LabeledOrderedTree& y : traces) {
      const TraceRoute h = trace_H(y, s, i);
      if (!h.ok) continue;
      // With the full route intact the channel has not touched these labels,
      // so the first surviving copy is already exact.
      if (h.nodes.size() != target.size())
        throw std::runtime_error("reconstruct_lp_small: route length mismatch");
      for (std::size_t t = 0; t < target.size(); ++t)
        out.labels[static_cast<std::size_t>(target[t])] =
            y.nodes[static_cast<std::size_t>(h.nodes[t])].label;
      found = true;
      break;
    }
    if (!found) {
      out.labels.clear();
      out.failed_anchor = i;
      return out;
    }
  }
  out.ok = true;
  return out;
}

}  // namespace treerec
