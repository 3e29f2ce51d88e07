#include "treerec/ted_recon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treerec {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_q(double q) {
  if (!(q >= 0.0 && q < 1.0)) fail("q must lie in [0, 1)");
}

// Pre-order slot listing; defines the left-to-right order used below.
std::vector<std::int32_t> pre_order(const LabeledOrderedTree& t) {
  std::vector<std::int32_t> order;
  order.reserve(t.nodes.size());
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    std::int32_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& kids = t.nodes[v].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

}  // namespace

std::int64_t alpha_hat(double count, const KaryShape& s, std::int64_t level, double q) {
  check_q(q);
  if (level < 0 || level > s.d - 2) fail("alpha_hat: level out of range");
  double mass = 0.0, pw = 1.0;
  for (std::int64_t h = 1; h <= level + 1; ++h) {
    pw *= static_cast<double>(s.k);
    mass += pw;
  }
  mass *= (1.0 - q);
  return static_cast<std::int64_t>(std::floor(count / mass + 0.5));
}

std::vector<PathEstimate> find_paths_detailed(const LabeledOrderedTree& y, const KaryShape& s,
                                              double q) {
  validate(s);
  check_q(q);
  if (s.d < 2) fail("find_paths: requires d >= 2");

  const std::vector<std::int32_t> dep = depths(y);
  for (std::int32_t d_v : dep)
    if (d_v > s.d) fail("find_paths: trace is deeper than the shape allows");
  const std::vector<std::int32_t> hei = heights(y);
  const std::vector<std::int32_t> par = parents(y);
  const std::vector<std::int64_t> sz = subtree_sizes(y);

  // Parents of depth-d nodes, deduplicated, left to right.
  std::vector<std::int32_t> witnesses;
  {
    std::vector<std::uint8_t> seen(y.nodes.size(), 0);
    for (std::int32_t v : pre_order(y)) {
      if (dep[v] == s.d && !seen[par[v]]) {
        seen[par[v]] = 1;
        witnesses.push_back(par[v]);
      }
    }
  }

  std::vector<PathEstimate> out;
  out.reserve(witnesses.size());
  for (std::int32_t v : witnesses) {
    // route[t] = ancestor of v at depth t (route[0] is the root).
    std::vector<std::int32_t> route(s.d);
    {
      std::int32_t cur = v;
      for (std::int64_t t = s.d - 1; t >= 0; --t) {
        route[t] = cur;
        cur = par[cur];
      }
    }

    PathEstimate est;
    est.route_node = v;
    est.digits.assign(s.d - 1, 0);
    for (std::int64_t l = 0; l <= s.d - 2; ++l) {
      const std::int32_t u = route[s.d - 1 - l];
      const auto& siblings = y.nodes[route[s.d - 2 - l]].children;
      // Members of height l+1 and the position of u among them.
      std::int64_t k_star = -1, seen_starred = 0;
      double between = 0.0;  // trapezoid count since the previous starred node
      std::int64_t ahat_sum = 0;
      for (std::int32_t z : siblings) {
        if (hei[z] == l + 1) {
          ahat_sum += alpha_hat(between, s, l, q);
          between = 0.0;
          if (z == u) {
            k_star = seen_starred;
            break;  // digits only need the starred nodes up to u
          }
          ++seen_starred;
        } else {
          between += static_cast<double>(sz[z]);
        }
      }
      if (k_star < 0) fail("find_paths: route node missing from its height class");
      est.digits[l] = std::min<std::int64_t>(k_star + ahat_sum, s.k - 1);
    }

    std::int64_t position = 0, pw = 1;
    for (std::int64_t l = 0; l < s.d - 1; ++l) {
      position += est.digits[l] * pw;
      pw *= s.k;
    }
    est.node = level_start(s, s.d - 1) + position;
    out.push_back(std::move(est));
  }
  return out;
}

std::vector<NodeIndex> find_paths(const LabeledOrderedTree& y, const KaryShape& s, double q) {
  std::vector<NodeIndex> out;
  for (const PathEstimate& est : find_paths_detailed(y, s, q)) out.push_back(est.node);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TedLargeResult reconstruct_ted_large(const std::vector<LabeledOrderedTree>& traces,
                                     const KaryShape& s, double q,
                                     const StringReconstructor& inner) {
  validate(s);
  check_q(q);
  if (s.d < 2) fail("reconstruct_ted_large: requires d >= 2");
  if (traces.empty()) fail("reconstruct_ted_large: needs at least one trace");

  const std::int64_t level_base = level_start(s, s.d - 1);
  const std::int64_t level_count = level_size(s, s.d - 1);
  // bucket[p]: traces whose estimate hit node level_base + p, with the
  // witnessing route node. One entry per trace (leftmost witness wins).
  std::vector<std::vector<std::pair<std::size_t, std::int32_t>>> buckets(level_count);
  for (std::size_t t = 0; t < traces.size(); ++t) {
    for (const PathEstimate& est : find_paths_detailed(traces[t], s, q)) {
      auto& bucket = buckets[est.node - level_base];
      if (!bucket.empty() && bucket.back().first == t) continue;
      bucket.emplace_back(t, est.route_node);
    }
  }

  TedLargeResult out;
  out.labels.assign(node_count(s), 0);
  for (std::int64_t p = 0; p < level_count; ++p) {
    const NodeIndex j = level_base + p;
    const auto& bucket = buckets[p];
    if (bucket.empty()) {
      out.empty_bucket = j;
      return out;
    }

    // Root path labels come straight off the first bucketed trace.
    {
      const LabeledOrderedTree& y = traces[bucket.front().first];
      const std::vector<std::int32_t> par = parents(y);
      std::vector<std::int32_t> route(s.d);
      std::int32_t cur = bucket.front().second;
      for (std::int64_t t = s.d - 1; t >= 1; --t) {
        route[t] = cur;
        cur = par[cur];
      }
      std::vector<NodeIndex> path = canonical_P(s, j);
      for (std::int64_t t = 1; t <= s.d - 1; ++t)
        out.labels[path[t - 1]] = y.nodes[route[t]].label;
    }

    // Leaf labels reduce to string reconstruction over the witnesses' child
    // label strings.
    std::vector<StringTrace> strings;
    strings.reserve(bucket.size());
    for (const auto& [t, v] : bucket) {
      StringTrace z;
      for (std::int32_t c : traces[t].nodes[v].children) z.push_back(traces[t].nodes[c].label);
      strings.push_back(std::move(z));
    }
    Labels bits = inner(strings, s.k, q);
    for (std::int64_t c = 0; c < s.k; ++c) out.labels[child_at(s, j, c)] = bits[c];
  }
  out.ok = true;
  return out;
}

std::int64_t stability_radius(const KaryShape& s, double q) {
  check_q(q);
  if (s.k == 1 || q == 0.0) return 1;
  const double inner = std::log(3.0 * static_cast<double>(s.d) * static_cast<double>(s.k)) /
                       std::log(1.0 / q);
  if (inner <= 1.0) return 1;
  const double raw = std::log(inner) / std::log(static_cast<double>(s.k));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

TedSmallResult reconstruct_ted_small(const std::vector<LabeledOrderedTree>& traces,
                                     const KaryShape& s, double q) {
  validate(s);
  check_q(q);
  if (s.d < 2) fail("reconstruct_ted_small: requires d >= 2");
  if (traces.empty()) fail("reconstruct_ted_small: needs at least one trace");

  const std::int64_t stab = stability_radius(s, q);
  TedSmallResult out;
  out.labels.assign(node_count(s), 0);

  for (NodeIndex i : index_sets(s).I) {
    const std::vector<NodeIndex> route = canonical_G(s, i);
    std::vector<std::int64_t> ones(route.size(), 0);
    std::int64_t stable_count = 0;
    for (const LabeledOrderedTree& y : traces) {
      if (!is_s_stable(y, s, i, stab)) continue;
      TraceRoute g = trace_G(y, s, i);
      ++stable_count;
      for (std::size_t t = 0; t < route.size(); ++t) ones[t] += y.nodes[g.nodes[t + 1]].label;
    }
    if (stable_count == 0) {
      out.failed_anchor = i;
      out.labels.clear();
      return out;
    }
    // Coordinate-wise majority; exact ties resolve to 0.
    for (std::size_t t = 0; t < route.size(); ++t)
      out.labels[route[t]] = (2 * ones[t] > stable_count) ? 1 : 0;
  }
  out.ok = true;
  return out;
}

}  // namespace treerec
