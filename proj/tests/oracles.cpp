#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treerec::testing {

namespace {

RefTree ref_from_slot(const LabeledOrderedTree& t, std::int32_t slot) {
  RefTree node;
  node.label = t.nodes[slot].label;
  node.entity = slot - 1;  // -1 on the root, matching DeletionSet indexing
  node.prov = t.nodes[slot].provenance;
  node.children.reserve(t.nodes[slot].children.size());
  for (std::int32_t c : t.nodes[slot].children) node.children.push_back(ref_from_slot(t, c));
  return node;
}

void emit_preorder(const RefTree& node, LabeledOrderedTree& out, std::int32_t slot) {
  out.nodes[slot].label = static_cast<std::uint8_t>(node.label);
  out.nodes[slot].provenance = node.prov;
  for (const RefTree& c : node.children) {
    out.nodes.emplace_back();
    const auto child_slot = static_cast<std::int32_t>(out.nodes.size() - 1);
    out.nodes[slot].children.push_back(child_slot);
    emit_preorder(c, out, child_slot);
  }
}

// Survivor forest of the subtree rooted at `node` under child-splicing
// deletion: a deleted node dissolves into its children's survivor lists.
std::vector<RefTree> ted_survivors(const RefTree& node, const std::vector<char>& deleted) {
  std::vector<RefTree> merged;
  for (const RefTree& c : node.children) {
    std::vector<RefTree> sub = ted_survivors(c, deleted);
    for (RefTree& s : sub) merged.push_back(std::move(s));
  }
  if (node.entity >= 0 && deleted[static_cast<std::size_t>(node.entity)]) return merged;
  RefTree kept;
  kept.label = node.label;
  kept.entity = node.entity;
  kept.prov = node.prov;
  kept.children = std::move(merged);
  return {std::move(kept)};
}

struct Found {
  RefTree* node = nullptr;
  RefTree* parent = nullptr;
  std::size_t pos = 0;
};

bool find_entity(RefTree& node, RefTree* parent, std::size_t pos, std::int64_t entity,
                 Found& out) {
  if (node.entity == entity) {
    out = {&node, parent, pos};
    return true;
  }
  for (std::size_t i = 0; i < node.children.size(); ++i)
    if (find_entity(node.children[i], &node, i, entity, out)) return true;
  return false;
}

void check_del(const LabeledOrderedTree& x, const DeletionSet& del) {
  std::int64_t prev = -1;
  for (NodeIndex v : del.nodes) {
    if (v <= prev) throw std::invalid_argument("reference channel: deletion set not increasing");
    if (v < 0 || v >= x.non_root_count())
      throw std::invalid_argument("reference channel: deletion index out of range");
    prev = v;
  }
}

}  // namespace

RefTree ref_from_tree(const LabeledOrderedTree& t) { return ref_from_slot(t, 0); }

LabeledOrderedTree ref_to_tree(const RefTree& root) {
  LabeledOrderedTree out;
  out.nodes.emplace_back();
  emit_preorder(root, out, 0);
  out.nodes[0].provenance = -1;
  return out;
}

LabeledOrderedTree ref_delete_ted(const LabeledOrderedTree& x, const DeletionSet& del) {
  check_del(x, del);
  std::vector<char> deleted(static_cast<std::size_t>(x.non_root_count()), 0);
  for (NodeIndex v : del.nodes) deleted[static_cast<std::size_t>(v)] = 1;
  RefTree root = ref_from_tree(x);
  // The root is never deleted, so the survivor list is a single tree.
  std::vector<RefTree> result = ted_survivors(root, deleted);
  return ref_to_tree(result.front());
}

LabeledOrderedTree ref_delete_lp(const LabeledOrderedTree& x, const DeletionSet& del) {
  check_del(x, del);
  RefTree root = ref_from_tree(x);
  for (NodeIndex v : del.nodes) {  // increasing order by construction
    Found f;
    if (!find_entity(root, nullptr, 0, v, f))
      throw std::logic_error("reference channel: entity vanished before its own deletion");
    // Leftmost-child chain starting at the carrier of entity v.
    std::vector<RefTree*> chain{f.node};
    while (!chain.back()->children.empty()) chain.push_back(&chain.back()->children.front());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      chain[i]->label = chain[i + 1]->label;
      chain[i]->entity = chain[i + 1]->entity;
      chain[i]->prov = chain[i + 1]->prov;
    }
    if (chain.size() == 1) {
      if (f.parent == nullptr)
        throw std::logic_error("reference channel: attempted to unlink the root");
      f.parent->children.erase(f.parent->children.begin() +
                               static_cast<std::ptrdiff_t>(f.pos));
    } else {
      RefTree* tail_parent = chain[chain.size() - 2];
      tail_parent->children.erase(tail_parent->children.begin());
    }
  }
  return ref_to_tree(root);
}

Labels ref_string_trace(const Labels& bits, const DeletionSet& del) {
  std::vector<char> deleted(bits.size(), 0);
  for (NodeIndex v : del.nodes) {
    if (v < 0 || v >= static_cast<std::int64_t>(bits.size()))
      throw std::invalid_argument("ref_string_trace: deletion index out of range");
    deleted[static_cast<std::size_t>(v)] = 1;
  }
  Labels out;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (!deleted[i]) out.push_back(bits[i]);
  return out;
}

bool same_tree_and_provenance(const LabeledOrderedTree& a, const LabeledOrderedTree& b) {
  if (!same_tree(a, b)) return false;
  // same_tree already established identical shape, so a parallel walk in
  // pool order of `a` against the recursion of `b` reduces to comparing
  // provenance along matching DFS visits.
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [sa, sb] = stack.back();
    stack.pop_back();
    if (sa != 0 && a.nodes[sa].provenance != b.nodes[sb].provenance) return false;
    const auto& ca = a.nodes[sa].children;
    const auto& cb = b.nodes[sb].children;
    for (std::size_t i = 0; i < ca.size(); ++i) stack.push_back({ca[i], cb[i]});
  }
  return true;
}

std::vector<DeletionSet> all_deletion_subsets(std::int64_t n) {
  if (n < 0 || n > 20) throw std::invalid_argument("all_deletion_subsets: n must be in [0, 20]");
  std::vector<DeletionSet> out;
  out.reserve(static_cast<std::size_t>(1) << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    DeletionSet del;
    for (std::int64_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) del.nodes.push_back(i);
    out.push_back(std::move(del));
  }
  return out;
}

std::vector<TreeShape> small_shapes(std::int64_t max_nodes) {
  std::vector<TreeShape> shapes;
  for (std::int64_t k = 1; k <= 3; ++k)
    for (std::int64_t d = 1; d <= 3; ++d) {
      KaryShape s{k, d};
      if (node_count(s) <= max_nodes) shapes.emplace_back(s);
    }
  for (std::int64_t n = 1; n <= max_nodes; ++n)
    for (std::int64_t d = 1; d <= n; ++d)
      if (n % d == 0) shapes.emplace_back(SpiderShape{n, d});
  return shapes;
}

bool is_subsequence(const Labels& candidate, const Labels& source) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < source.size() && i < candidate.size(); ++j)
    if (candidate[i] == source[j]) ++i;
  return i == candidate.size();
}

std::map<std::string, double> exact_string_trace_law(const Labels& bits, double q) {
  const auto n = static_cast<std::int64_t>(bits.size());
  if (n > 20) throw std::invalid_argument("exact_string_trace_law: at most 20 bits");
  std::map<std::string, double> law;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::string key;
    int deleted = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i))
        ++deleted;
      else
        key.push_back(bits[static_cast<std::size_t>(i)] ? '1' : '0');
    }
    law[key] += std::pow(q, deleted) * std::pow(1.0 - q, static_cast<double>(n - deleted));
  }
  return law;
}

double total_variation(const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
  double tv = 0.0;
  for (const auto& [key, pa] : a) {
    auto it = b.find(key);
    tv += std::abs(pa - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, pb] : b)
    if (a.find(key) == a.end()) tv += pb;
  return tv / 2.0;
}

std::vector<double> ref_expected_mean(const std::vector<double>& a, std::int64_t d, double q) {
  const auto n = static_cast<std::int64_t>(a.size());
  // Pascal's triangle, sized for the largest row index used below.
  const std::int64_t rows = std::max<std::int64_t>(d, (n + d - 1) / d) + 1;
  std::vector<std::vector<double>> choose(static_cast<std::size_t>(rows),
                                          std::vector<double>(static_cast<std::size_t>(rows), 0));
  for (std::size_t r = 0; r < choose.size(); ++r) {
    choose[r][0] = 1.0;
    for (std::size_t c = 1; c <= r; ++c)
      choose[r][c] = choose[r - 1][c - 1] + (c <= r - 1 ? choose[r - 1][c] : 0.0);
  }
  const double qd = std::pow(q, static_cast<double>(d));
  std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t l = 0; l < n; ++l) {
    const std::int64_t rl = l % d, sl = l / d;
    double acc = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      const std::int64_t rj = j % d, sj = j / d;
      if (rj < rl || sj < sl) continue;
      acc += a[static_cast<std::size_t>(j)] *
             choose[static_cast<std::size_t>(rj)][static_cast<std::size_t>(rl)] *
             std::pow(1.0 - q, static_cast<double>(rl)) *
             std::pow(q, static_cast<double>(rj - rl)) *
             choose[static_cast<std::size_t>(sj)][static_cast<std::size_t>(sl)] *
             std::pow(1.0 - qd, static_cast<double>(sl)) *
             std::pow(qd, static_cast<double>(sj - sl));
    }
    mean[static_cast<std::size_t>(l)] = (1.0 - q) * acc;
  }
  return mean;
}

StringReconstructor recording_reconstructor(StringReconstructor inner,
                                            std::shared_ptr<CallLog> log) {
  return [inner = std::move(inner), log](const std::vector<StringTrace>& traces, std::int64_t m,
                                         double q) {
    log->push_back(ReconCall{traces, m, q});
    return inner(traces, m, q);
  };
}

StringReconstructor scripted_reconstructor(std::vector<Labels> answers) {
  auto next = std::make_shared<std::size_t>(0);
  return [answers = std::move(answers), next](const std::vector<StringTrace>&, std::int64_t m,
                                              double) {
    if (*next >= answers.size())
      throw std::logic_error("scripted_reconstructor: more calls than scripted answers");
    const Labels& ans = answers[(*next)++];
    if (static_cast<std::int64_t>(ans.size()) != m)
      throw std::logic_error("scripted_reconstructor: call length disagrees with the script");
    return ans;
  };
}

double two_proportion_z(std::int64_t s1, std::int64_t n1, std::int64_t s2, std::int64_t n2) {
  const double p1 = static_cast<double>(s1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(s2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(s1 + s2) / static_cast<double>(n1 + n2);
  const double var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
  if (var <= 0.0) return 0.0;
  return (p1 - p2) / std::sqrt(var);
}

}  // namespace treerec::testing
