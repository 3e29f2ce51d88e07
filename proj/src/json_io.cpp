#include "treerec/json_io.hpp"

#include <stdexcept>

namespace treerec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

json node_to_json(const LabeledOrderedTree& t, std::int32_t v) {
  json out;
  out["label"] = (v == 0) ? json(nullptr) : json(static_cast<int>(t.nodes[v].label));
  json kids = json::array();
  for (std::int32_t c : t.nodes[v].children) kids.push_back(node_to_json(t, c));
  out["children"] = std::move(kids);
  return out;
}

// Appends the subtree described by j; returns its pool slot. Children are
// appended after their parent, so pool order is pre-order.
std::int32_t node_from_json(const json& j, LabeledOrderedTree& t, bool is_root) {
  if (!j.is_object() || !j.contains("label") || !j.contains("children"))
    fail("tree json: each node needs label and children");
  const json& lab = j.at("label");
  std::int32_t slot = static_cast<std::int32_t>(t.nodes.size());
  t.nodes.emplace_back();
  if (is_root) {
    if (!lab.is_null()) fail("tree json: root label must be null");
  } else {
    if (!lab.is_number_integer()) fail("tree json: non-root label must be 0 or 1");
    int v = lab.get<int>();
    if (v != 0 && v != 1) fail("tree json: non-root label must be 0 or 1");
    t.nodes[slot].label = static_cast<std::uint8_t>(v);
  }
  const json& kids = j.at("children");
  if (!kids.is_array()) fail("tree json: children must be an array");
  for (const json& kid : kids) {
    std::int32_t c = node_from_json(kid, t, false);
    t.nodes[slot].children.push_back(c);
  }
  return slot;
}

}  // namespace

nlohmann::json tree_to_json(const LabeledOrderedTree& t) { return node_to_json(t, 0); }

LabeledOrderedTree tree_from_json(const nlohmann::json& j) {
  LabeledOrderedTree t;
  node_from_json(j, t, true);
  return t;
}

nlohmann::json shape_to_json(const TreeShape& s) {
  json out;
  if (const auto* k = std::get_if<KaryShape>(&s)) {
    out["kind"] = "kary";
    out["k"] = k->k;
    out["d"] = k->d;
  } else {
    const auto& sp = std::get<SpiderShape>(s);
    out["kind"] = "spider";
    out["n"] = sp.n;
    out["d"] = sp.d;
  }
  return out;
}

TreeShape shape_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) fail("shape json: missing kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "kary") {
    KaryShape s{j.at("k").get<std::int64_t>(), j.at("d").get<std::int64_t>()};
    validate(s);
    return s;
  }
  if (kind == "spider") {
    SpiderShape s{j.at("n").get<std::int64_t>(), j.at("d").get<std::int64_t>()};
    validate(s);
    return s;
  }
  fail("shape json: kind must be kary or spider");
}

Labels parse_labels(const std::string& text, std::int64_t n) {
  Labels out;
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) {
    std::string bits;
    bits.reserve((text.size() - 2) * 4);
    for (std::size_t i = 2; i < text.size(); ++i) {
      char ch = text[i];
      int v;
      if (ch >= '0' && ch <= '9') v = ch - '0';
      else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
      else fail("labels: bad hex digit");
      for (int b = 3; b >= 0; --b) bits.push_back(static_cast<char>('0' + ((v >> b) & 1)));
    }
    if (static_cast<std::int64_t>(bits.size()) < n) bits.insert(0, n - bits.size(), '0');
    const std::size_t extra = bits.size() - static_cast<std::size_t>(n);
    // Leading bits beyond n must be zero, otherwise the value does not fit.
    for (std::size_t i = 0; i < extra; ++i)
      if (bits[i] != '0') fail("labels: hex value wider than label count");
    out.reserve(n);
    for (std::size_t i = extra; i < bits.size(); ++i)
      out.push_back(static_cast<std::uint8_t>(bits[i] - '0'));
    return out;
  }
  if (static_cast<std::int64_t>(text.size()) != n) fail("labels: bit string must have length n");
  out.reserve(n);
  for (char ch : text) {
    if (ch != '0' && ch != '1') fail("labels: bit string must be 0/1");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

std::string labels_to_bit_string(const Labels& labels) {
  std::string s;
  s.reserve(labels.size());
  for (std::uint8_t b : labels) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace treerec
